use super::manifold::ManifoldAtom;
use super::swpoly::{s_class, wu_classes, SWPolynomial};
use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::weightss::linalg::Span;
use crate::weightss::Field;

/// Largest dimension of a built-in bordism generator.
pub const MAX_GENERATOR_DIMENSION: u32 = 16;

fn is_mersenne(k: u32) -> bool {
    (k + 1).is_power_of_two()
}

/// Built-in generator of the unoriented bordism ring in dimension `k`:
/// `RP^k` for even `k`, and the Dold manifold `P(2^r − 1, s·2^r)` for
/// `k = 2^r(2s+1) − 1` with `s ≥ 1`. `None` for `k = 2^j − 1` and for `k`
/// beyond [`MAX_GENERATOR_DIMENSION`].
pub fn bordism_generator(k: u32) -> Option<ManifoldAtom> {
    if k == 0 || is_mersenne(k) || k > MAX_GENERATOR_DIMENSION {
        return None;
    }
    if k.is_multiple_of(2) {
        return Some(ManifoldAtom::rp(k));
    }
    let r = (k + 1).trailing_zeros();
    let s = ((k + 1) >> r) / 2;
    Some(ManifoldAtom::dold((1 << r) - 1, s << r))
}

/// `s_n[M] ≠ 0`, the criterion for `M` to be a polynomial generator.
pub fn is_indecomposable(m: &ManifoldAtom) -> Result<bool> {
    m.evaluate(&s_class(m.dimension()))
}

/// Partitions of `n` in decreasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=max.min(n)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` with no part of the form `2^j − 1`; they index a
/// basis of the unoriented bordism group in dimension `n`.
pub fn bordism_partitions(n: u32) -> Vec<Vec<u32>> {
    partitions(n)
        .into_iter()
        .filter(|p| p.iter().all(|&k| !is_mersenne(k)))
        .collect()
}

/// Products of built-in generators, one per partition of `n` into parts
/// not of the form `2^j − 1`.
pub fn spanning_set(n: u32) -> Result<Vec<ManifoldAtom>> {
    let mut out = Vec::new();
    let mut missing = Vec::new();
    for p in bordism_partitions(n) {
        let mut m = ManifoldAtom::point();
        let mut ok = true;
        for &k in &p {
            match bordism_generator(k) {
                Some(g) => m = m.product(&g),
                None => ok = false,
            }
        }
        if ok {
            out.push(m);
        } else {
            missing.push(format!("{p:?}"));
        }
    }
    if !missing.is_empty() {
        return Err(Error::precondition(
            "complete_spanning_set",
            format!(
                "no built-in manifolds for partitions {}",
                missing.join(", ")
            ),
        ));
    }
    Ok(out)
}

/// The functionals `w₁^i w_{n−i}`, `i = 0..=n`.
pub fn invariant_functionals(n: u32) -> Vec<SWPolynomial> {
    (0..=n)
        .map(|i| SWPolynomial::w(1).pow(i).mul(&SWPolynomial::w(n - i)))
        .collect()
}

/// The functionals `w₁^{n−2i} v_i²`, `i = 0..=⌊n/2⌋`.
pub fn wu_functionals(n: u32) -> Vec<SWPolynomial> {
    let v = wu_classes(n / 2);
    (0..=n / 2)
        .map(|i| SWPolynomial::w(1).pow(n - 2 * i).mul(&v[i as usize].pow(2)))
        .collect()
}

fn bit(b: bool) -> Rat {
    Rat::from_integer(i64::from(b).into())
}

/// Values of each functional on each manifold, one row per functional.
pub fn evaluation_rows(funcs: &[SWPolynomial], set: &[ManifoldAtom]) -> Result<Vec<Vec<Rat>>> {
    funcs
        .iter()
        .map(|f| set.iter().map(|m| m.evaluate(f).map(bit)).collect())
        .collect()
}

fn rank(rows: Vec<Vec<Rat>>, dim: usize) -> usize {
    Span::from_vectors(Field::Prime(2), dim, rows).rank()
}

/// Rank over F₂ of all Stiefel–Whitney numbers on the spanning set; equals
/// the number of partitions when the set is a basis of bordism.
pub fn bordism_rank(n: u32) -> Result<usize> {
    let set = spanning_set(n)?;
    let funcs: Vec<SWPolynomial> = partitions(n)
        .into_iter()
        .map(SWPolynomial::monomial)
        .collect();
    Ok(rank(evaluation_rows(&funcs, &set)?, set.len()))
}

/// Rank over F₂ of the numbers `w₁^i w_{n−i}` as functionals on the
/// bordism group in dimension `n`.
pub fn invariant_span_rank(n: u32) -> Result<usize> {
    let set = spanning_set(n)?;
    Ok(rank(
        evaluation_rows(&invariant_functionals(n), &set)?,
        set.len(),
    ))
}

/// Rank over F₂ of the numbers `w₁^{n−2i} v_i²`.
pub fn wu_span_rank(n: u32) -> Result<usize> {
    let set = spanning_set(n)?;
    Ok(rank(evaluation_rows(&wu_functionals(n), &set)?, set.len()))
}

/// Whether `{w₁^i w_{n−i}}` and `{w₁^{n−2i} v_i²}` span the same space of
/// functionals on the bordism group.
pub fn span_equivalence(n: u32) -> Result<bool> {
    let set = spanning_set(n)?;
    let a = evaluation_rows(&invariant_functionals(n), &set)?;
    let b = evaluation_rows(&wu_functionals(n), &set)?;
    let ra = rank(a.clone(), set.len());
    let rb = rank(b.clone(), set.len());
    let both = rank(a.into_iter().chain(b).collect(), set.len());
    Ok(ra == both && rb == both)
}

/// One compared number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopRow {
    pub number: SWPolynomial,
    pub left: bool,
    pub right: bool,
}

/// Comparison of `(RP^{2^a})²` with `(RP²)^{2^a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopReport {
    pub a: u32,
    pub dimension: u32,
    pub left: String,
    pub right: String,
    /// For `a = 1` the two sides coincide and nothing is tested.
    pub vacuous: bool,
    pub rows: Vec<FlopRow>,
    pub probes: Vec<FlopRow>,
}

impl FlopReport {
    /// Every number `w₁^i w_{n−i}` agrees.
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.left == r.right)
    }
}

/// Compares the numbers `w₁^i w_{n−i}`, `n = 2^{a+1}`, on
/// `(RP^{2^a})²` and `(RP²)^{2^a}`, together with extra probe numbers
/// that are reported but not required to agree.
pub fn flop_relation_check(a: u32, probes: &[SWPolynomial]) -> Result<FlopReport> {
    if !(1..=3).contains(&a) {
        return Err(Error::precondition(
            "flop_exponent",
            format!("a = {a} outside the supported range 1..=3"),
        ));
    }
    let n = 1u32 << (a + 1);
    let left = ManifoldAtom::rp(1 << a).power(2);
    let right = ManifoldAtom::rp(2).power(1 << a);
    let row = |f: &SWPolynomial| -> Result<FlopRow> {
        Ok(FlopRow {
            number: f.clone(),
            left: left.evaluate(f)?,
            right: right.evaluate(f)?,
        })
    };
    let rows = invariant_functionals(n)
        .iter()
        .map(row)
        .collect::<Result<Vec<_>>>()?;
    let probes = probes.iter().map(row).collect::<Result<Vec<_>>>()?;
    Ok(FlopReport {
        a,
        dimension: n,
        left: left.name().to_string(),
        right: right.name().to_string(),
        vacuous: a == 1,
        rows,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_indecomposable() {
        for k in 1..=MAX_GENERATOR_DIMENSION {
            match bordism_generator(k) {
                Some(g) => {
                    assert_eq!(g.dimension(), k);
                    assert!(is_indecomposable(&g).unwrap(), "{}", g.name());
                }
                None => assert!(is_mersenne(k)),
            }
        }
        assert_eq!(bordism_generator(5).unwrap().name(), "P(1,2)");
        assert!(!is_indecomposable(&ManifoldAtom::rp(2).power(2)).unwrap());
        assert!(!is_indecomposable(&ManifoldAtom::rp(3)).unwrap());
    }

    #[test]
    fn spanning_sets_are_bases() {
        let expected = [1, 0, 1, 0, 2, 1, 3, 1, 5];
        for (n, &d) in expected.iter().enumerate() {
            assert_eq!(bordism_partitions(n as u32).len(), d);
            assert_eq!(bordism_rank(n as u32).unwrap(), d, "n = {n}");
        }
    }

    #[test]
    fn odd_dimensions_have_no_invariant_numbers() {
        for n in [1, 3, 5, 7] {
            assert_eq!(invariant_span_rank(n).unwrap(), 0);
        }
    }

    #[test]
    fn flop_relation_in_dimension_eight() {
        let r = flop_relation_check(2, &[SWPolynomial::parse("w2 w6").unwrap()]).unwrap();
        assert!(r.holds());
        assert!(!r.vacuous);
        assert_eq!(r.rows.len(), 9);
        assert!(flop_relation_check(1, &[]).unwrap().vacuous);
        assert!(flop_relation_check(0, &[]).is_err());
    }

    /// Degree-`n` dimension of `F₂[RP², RP⁴, RP⁸, …]` modulo
    /// `(RP^{2^a})² = (RP²)^{2^a}`: monomials `(RP²)^i Π RP^{2^a}` with
    /// distinct `a ≥ 2`, counted by subsets of `{2, 4, 8, …}` with sum at
    /// most `n/2`.
    fn quotient_ring_dimension(n: u32) -> usize {
        if n % 2 == 1 {
            return 0;
        }
        let parts: Vec<u32> = (1..5).map(|j| 1 << j).filter(|&p| p <= n / 2).collect();
        (0..1u32 << parts.len())
            .filter(|mask| {
                let sum: u32 = parts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, p)| p)
                    .sum();
                sum <= n / 2
            })
            .count()
    }

    #[test]
    fn ranks_match_the_flop_quotient_ring() {
        for n in 1..=12u32 {
            let r = invariant_span_rank(n).unwrap();
            assert_eq!(r, quotient_ring_dimension(n), "n = {n}");
            assert_eq!(wu_span_rank(n).unwrap(), r, "n = {n}");
            assert!(span_equivalence(n).unwrap(), "n = {n}");
        }
    }
}
