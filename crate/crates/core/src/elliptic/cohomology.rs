//! Finite graded commutative cohomology rings with an integration
//! functional, Chern classes and divisor classes.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Coeff, Rat};

/// A ring element written as `(basis name, coefficient)` pairs.
pub type ClassSpec = Vec<(String, Rat)>;

#[derive(Debug, Clone, PartialEq)]
pub struct DivisorSpec {
    pub name: String,
    pub class: ClassSpec,
    pub discrepancy: Rat,
}

/// Input form of a [`CohomologyModel`].
///
/// Degrees are complex degrees (a divisor class has degree 1). The first
/// basis element is the unit. Products are given as triples `a · b = Σ …`;
/// the reversed product is inferred, and products not listed are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelSpec {
    pub dimension: u32,
    pub basis: Vec<(String, u32)>,
    pub products: Vec<(String, String, ClassSpec)>,
    pub integrals: Vec<(String, Rat)>,
    /// `c_1, …, c_d` of the tangent bundle.
    pub chern: Vec<ClassSpec>,
    pub divisors: Vec<DivisorSpec>,
}

#[derive(Debug, Clone)]
pub struct Divisor {
    pub name: String,
    pub class: Vec<Rat>,
    pub discrepancy: Rat,
}

#[derive(Debug, Clone)]
pub struct CohomologyModel {
    dimension: u32,
    names: Vec<String>,
    degrees: Vec<u32>,
    table: Vec<Vec<Vec<Rat>>>,
    integrals: Vec<Rat>,
    chern: Vec<Vec<Rat>>,
    divisors: Vec<Divisor>,
}

impl CohomologyModel {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        let n = spec.basis.len();
        if n == 0 || spec.basis[0].1 != 0 {
            return Err(Error::input(
                "the first basis element must be the unit, in degree 0",
            ));
        }
        let index: BTreeMap<&str, usize> = spec
            .basis
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.as_str(), i))
            .collect();
        if index.len() != n {
            return Err(Error::input("basis names must be distinct"));
        }
        let degrees: Vec<u32> = spec.basis.iter().map(|b| b.1).collect();
        if let Some(&d) = degrees.iter().find(|&&d| d > spec.dimension) {
            return Err(Error::input(format!(
                "basis degree {d} exceeds the dimension {}",
                spec.dimension
            )));
        }
        let vector = |c: &ClassSpec| -> Result<Vec<Rat>> {
            let mut v = vec![Rat::zero(); n];
            for (name, x) in c {
                let i = index
                    .get(name.as_str())
                    .ok_or_else(|| Error::UnknownReference(name.clone()))?;
                v[*i] += x;
            }
            Ok(v)
        };
        let homogeneous = |v: &[Rat], deg: u32, what: &str| -> Result<()> {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() && degrees[i] != deg {
                    return Err(Error::precondition(
                        "graded",
                        format!(
                            "{what} has a component `{}` outside degree {deg}",
                            spec.basis[i].0
                        ),
                    ));
                }
            }
            Ok(())
        };

        let mut table: Vec<Vec<Option<Vec<Rat>>>> = vec![vec![None; n]; n];
        for i in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[i] = Rat::one();
            table[0][i] = Some(e.clone());
            table[i][0] = Some(e);
        }
        for (a, b, value) in &spec.products {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| Error::UnknownReference(a.clone()))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| Error::UnknownReference(b.clone()))?;
            let v = vector(value)?;
            homogeneous(&v, degrees[ia] + degrees[ib], &format!("{a}*{b}"))?;
            for (x, y) in [(ia, ib), (ib, ia)] {
                match &table[x][y] {
                    Some(old) if *old != v => {
                        return Err(Error::precondition(
                            "commutative",
                            format!("conflicting values for the product {a}*{b}"),
                        ))
                    }
                    _ => table[x][y] = Some(v.clone()),
                }
            }
        }
        let table: Vec<Vec<Vec<Rat>>> = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.unwrap_or_else(|| vec![Rat::zero(); n]))
                    .collect()
            })
            .collect();
        for (i, row) in table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if degrees[i] + degrees[j] > spec.dimension && v.iter().any(|x| !x.is_zero()) {
                    return Err(Error::precondition(
                        "graded",
                        "product above the top degree is nonzero".to_string(),
                    ));
                }
            }
        }

        let mut integrals = vec![Rat::zero(); n];
        for (name, x) in &spec.integrals {
            let i = *index
                .get(name.as_str())
                .ok_or_else(|| Error::UnknownReference(name.clone()))?;
            if degrees[i] != spec.dimension && !x.is_zero() {
                return Err(Error::precondition(
                    "integral_top_degree",
                    format!("integral of `{name}` is nonzero below the top degree"),
                ));
            }
            integrals[i] = x.clone();
        }

        if spec.chern.len() != spec.dimension as usize {
            return Err(Error::input(format!(
                "expected {} Chern classes, got {}",
                spec.dimension,
                spec.chern.len()
            )));
        }
        let mut chern = Vec::new();
        for (k, c) in spec.chern.iter().enumerate() {
            let v = vector(c)?;
            homogeneous(&v, k as u32 + 1, &format!("c_{}", k + 1))?;
            chern.push(v);
        }
        let mut divisors = Vec::new();
        for d in &spec.divisors {
            let v = vector(&d.class)?;
            homogeneous(&v, 1, &format!("divisor `{}`", d.name))?;
            divisors.push(Divisor {
                name: d.name.clone(),
                class: v,
                discrepancy: d.discrepancy.clone(),
            });
        }

        let model = Self {
            dimension: spec.dimension,
            names: spec.basis.iter().map(|b| b.0.clone()).collect(),
            degrees,
            table,
            integrals,
            chern,
            divisors,
        };
        model.check_associative()?;
        Ok(model)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.names.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul_rat(&self.table[i][j], &self.basis_vector(k));
                    let right = self.mul_rat(&self.basis_vector(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::precondition(
                            "associative",
                            format!(
                                "({}*{})*{} != {}*({}*{})",
                                self.names[i],
                                self.names[j],
                                self.names[k],
                                self.names[i],
                                self.names[j],
                                self.names[k]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn chern(&self) -> &[Vec<Rat>] {
        &self.chern
    }

    pub fn divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    /// The same ring with the divisor list replaced.
    pub fn with_divisors(&self, divisors: Vec<Divisor>) -> Self {
        Self {
            divisors,
            ..self.clone()
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.rank()];
        v[i] = Rat::one();
        v
    }

    pub fn unit(&self) -> Vec<Rat> {
        self.basis_vector(0)
    }

    pub fn mul_rat(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.rank()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Product of ring elements with coefficients in any [`Coeff`] ring.
    pub fn mul<C: Coeff>(&self, a: &[C], b: &[C]) -> Vec<C> {
        let mut out = vec![C::zero_elem(); self.rank()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero_elem() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero_elem() {
                    continue;
                }
                let xy = x.mul_elem(y);
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add_elem(&xy.scale_by(c));
                    }
                }
            }
        }
        out
    }

    pub fn pow_rat(&self, a: &[Rat], k: u32) -> Vec<Rat> {
        (0..k).fold(self.unit(), |acc, _| self.mul_rat(&acc, a))
    }

    /// `Σ_j s_j a^j` for a power series `s` (dense coefficients) in a
    /// nilpotent class `a`.
    pub fn eval_series<C: Coeff>(&self, coeffs: &[C], a: &[Rat]) -> Vec<C> {
        let mut out = vec![C::zero_elem(); self.rank()];
        let mut power = self.unit();
        for s in coeffs {
            if power.iter().all(Zero::is_zero) {
                break;
            }
            for (k, p) in power.iter().enumerate() {
                if !p.is_zero() {
                    out[k] = out[k].add_elem(&s.scale_by(p));
                }
            }
            power = self.mul_rat(&power, a);
        }
        out
    }

    pub fn integrate<C: Coeff>(&self, v: &[C]) -> C {
        v.iter()
            .zip(&self.integrals)
            .filter(|(_, w)| !w.is_zero())
            .fold(C::zero_elem(), |acc, (x, w)| acc.add_elem(&x.scale_by(w)))
    }
}

/// `ℙⁿ`: basis `1, h, …, h^n`, `c(T) = (1 + h)^{n+1}`, `∫ h^n = 1`.
pub fn projective_space(n: u32) -> ModelSpec {
    let name = |k: u32| match k {
        0 => "1".to_string(),
        1 => "h".to_string(),
        k => format!("h{k}"),
    };
    let mut products = Vec::new();
    for a in 1..=n {
        for b in a..=n {
            let value = if a + b <= n {
                vec![(name(a + b), Rat::one())]
            } else {
                vec![]
            };
            products.push((name(a), name(b), value));
        }
    }
    let chern = (1..=n)
        .map(|k| {
            vec![(
                name(k),
                crate::exactalg::binomial(&Rat::from_integer((n + 1).into()), k),
            )]
        })
        .collect();
    ModelSpec {
        dimension: n,
        basis: (0..=n).map(|k| (name(k), k)).collect(),
        products,
        integrals: vec![(name(n), Rat::one())],
        chern,
        divisors: vec![],
    }
}

/// Blowup of `ℙ²` at a point: basis `1, h, e, pt` with `h² = pt`,
/// `e² = −pt`, `he = 0`, `c₁ = 3h − e`, `c₂ = 4 pt`. The exceptional curve
/// carries discrepancy `a`.
pub fn blown_up_plane(a: Rat) -> ModelSpec {
    let r = |x: i64| Rat::from_integer(x.into());
    let s = |x: &str| x.to_string();
    ModelSpec {
        dimension: 2,
        basis: vec![(s("1"), 0), (s("h"), 1), (s("e"), 1), (s("pt"), 2)],
        products: vec![
            (s("h"), s("h"), vec![(s("pt"), r(1))]),
            (s("e"), s("e"), vec![(s("pt"), r(-1))]),
            (s("h"), s("e"), vec![]),
        ],
        integrals: vec![(s("pt"), r(1))],
        chern: vec![vec![(s("h"), r(3)), (s("e"), r(-1))], vec![(s("pt"), r(4))]],
        divisors: vec![DivisorSpec {
            name: s("E"),
            class: vec![(s("e"), r(1))],
            discrepancy: a,
        }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn projective_plane_ring() {
        let m = CohomologyModel::new(&projective_space(2)).unwrap();
        let h = m.basis_vector(1);
        assert_eq!(m.integrate(&m.pow_rat(&h, 2)), int(1));
        assert!(m.pow_rat(&h, 3).iter().all(Zero::is_zero));
        assert_eq!(m.chern()[0], vec![int(0), int(3), int(0)]);
    }

    #[test]
    fn blowup_ring_numbers() {
        let m = CohomologyModel::new(&blown_up_plane(int(1))).unwrap();
        let c1 = m.chern()[0].clone();
        // c₁² = 9 − 1 = 8, c₂ = 4
        assert_eq!(m.integrate(&m.mul_rat(&c1, &c1)), int(8));
        assert_eq!(m.integrate(&m.chern()[1]), int(4));
    }

    #[test]
    fn load_checks() {
        let mut bad = projective_space(2);
        bad.integrals.push(("h".into(), int(1)));
        assert!(CohomologyModel::new(&bad).is_err());

        let mut bad = projective_space(2);
        bad.products
            .push(("h".into(), "h".into(), vec![("h".into(), int(1))]));
        assert!(CohomologyModel::new(&bad).is_err());

        let mut bad = blown_up_plane(int(1));
        bad.products[2].2 = vec![("pt".into(), int(1))];
        bad.products.push(("e".into(), "h".into(), vec![]));
        assert!(CohomologyModel::new(&bad).is_err());

        let mut bad = projective_space(1);
        bad.chern[0] = vec![("unknown".into(), int(1))];
        assert!(matches!(
            CohomologyModel::new(&bad),
            Err(Error::UnknownReference(_))
        ));
    }
}
