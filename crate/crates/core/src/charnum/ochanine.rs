use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::span::partitions;
use crate::elliptic::chern_root_product;
use crate::error::{Error, Result};
use crate::exactalg::{binomial, int, rat, Coeff, Rat, TruncSeries};

/// Polynomial in `δ, ε` with rational coefficients, keyed by the exponents
/// `(i, j)` of `δ^i ε^j`. Weighted degree: `δ` has weight 1, `ε` weight 2.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenusPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl GenusPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn delta() -> Self {
        Self::monomial(Rat::one(), 1, 0)
    }

    pub fn epsilon() -> Self {
        Self::monomial(Rat::one(), 0, 1)
    }

    /// `γ = (δ² − ε)/4`.
    pub fn gamma() -> Self {
        Self::monomial(rat(1, 4), 2, 0).add(&Self::monomial(rat(-1, 4), 0, 1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Weighted degrees of the nonzero terms.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|(i, j)| i + 2 * j).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    fn add_term(&mut self, key: (u32, u32), c: Rat) {
        let v = self.terms.entry(key).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &other.terms {
                out.add_term((a + x, b + y), c * d);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    /// Coefficients in the basis `δ^i γ^j`, via `ε = δ² − 4γ`.
    pub fn gamma_coefficients(&self) -> BTreeMap<(u32, u32), Rat> {
        let mut out: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            // (δ² − 4γ)^j = Σ_k C(j,k) δ^{2(j−k)} (−4γ)^k
            for k in 0..=*j {
                let b = binomial(&int(i64::from(*j)), k);
                let sign = if k % 2 == 0 { int(1) } else { int(-1) };
                let four = Rat::from_integer(BigInt::from(4).pow(k));
                let v = out.entry((i + 2 * (j - k), k)).or_insert_with(Rat::zero);
                *v += c * b * sign * four;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Rendering in `δ` and `γ`, highest power of `γ` first.
    pub fn render_gamma(&self) -> String {
        render(self.gamma_coefficients(), "gamma")
    }
}

fn render(terms: BTreeMap<(u32, u32), Rat>, second: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut keys: Vec<(u32, u32)> = terms.keys().copied().collect();
    keys.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    let mut out = String::new();
    for (n, k) in keys.iter().enumerate() {
        let c = &terms[k];
        let mut factors = Vec::new();
        for (name, e) in [(second, k.1), ("delta", k.0)] {
            match e {
                0 => {}
                1 => factors.push(name.to_string()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        let mag = c.abs();
        let body = match (factors.is_empty(), mag.is_one()) {
            (true, _) => mag.to_string(),
            (false, true) => factors.join("*"),
            (false, false) => format!("{mag}*{}", factors.join("*")),
        };
        match (n, c.is_negative()) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

impl fmt::Display for GenusPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self.terms.clone(), "epsilon"))
    }
}

impl Coeff for GenusPoly {
    fn zero_elem() -> Self {
        Self::zero()
    }
    fn one_elem() -> Self {
        Self::constant(Rat::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn neg_elem(&self) -> Self {
        self.neg()
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale_by(&self, r: &Rat) -> Self {
        self.scale(r)
    }
    fn inverse_elem(&self) -> Option<Self> {
        match self.terms.iter().next() {
            Some((&(0, 0), c)) if self.terms.len() == 1 => Some(Self::constant(c.recip())),
            _ => None,
        }
    }
    fn from_rat(r: &Rat) -> Self {
        Self::constant(r.clone())
    }
}

/// `g′(t) = (1 − 2δt² + εt⁴)^{−1/2}` through `t^cap`.
pub fn ochanine_log_derivative(cap: u32) -> TruncSeries<GenusPoly> {
    let u = TruncSeries::univariate(
        "t",
        cap,
        (0..=4u32).map(|k| match k {
            2 => GenusPoly::delta().scale(&int(-2)),
            4 => GenusPoly::epsilon(),
            _ => GenusPoly::zero(),
        }),
    );
    let mut out = u.zero_like();
    let mut power = u.one_like();
    for k in 0..=cap / 2 {
        out = out.add(&power.scale(&binomial(&rat(-1, 2), k)));
        power = power.mul(&u);
    }
    out
}

/// The logarithm `g(t) = ∫ g′`, through `t^cap`.
pub fn ochanine_log(cap: u32) -> TruncSeries<GenusPoly> {
    let d = ochanine_log_derivative(cap.saturating_sub(1));
    TruncSeries::univariate(
        "t",
        cap,
        (0..=cap).map(|k| {
            if k == 0 {
                GenusPoly::zero()
            } else {
                d.coeff(&[k - 1]).scale(&Rat::new(1.into(), k.into()))
            }
        }),
    )
}

/// `φ(CPⁿ) = (n+1)·[t^{n+1}] g(t)`.
pub fn ochanine_cp(n: u32) -> GenusPoly {
    ochanine_log(n + 1)
        .coeff(&[n + 1])
        .scale(&Rat::from_integer((n + 1).into()))
}

fn compose(g: &TruncSeries<GenusPoly>, f: &TruncSeries<GenusPoly>) -> TruncSeries<GenusPoly> {
    let mut out = f.zero_like();
    let mut power = f.one_like();
    for j in 0..=f.cap() {
        let c = g.coeff(&[j]);
        if !c.is_zero() {
            out = out.add(&power.mul_coeff(&c));
        }
        power = power.mul(f);
    }
    out
}

/// Compositional inverse of a series `t + O(t²)`, through `x^cap`, by
/// correcting one coefficient at a time.
pub fn reversion(g: &TruncSeries<GenusPoly>, cap: u32) -> Result<TruncSeries<GenusPoly>> {
    if !g.coeff(&[0]).is_zero() || g.coeff(&[1]) != GenusPoly::one_elem() {
        return Err(Error::input("reversion expects a series t + O(t^2)"));
    }
    let g = g.truncate(cap);
    let mut f = TruncSeries::univariate("t", cap, [GenusPoly::zero(), GenusPoly::one_elem()]);
    for k in 2..=cap {
        let err = compose(&g, &f).coeff(&[k]);
        if !err.is_zero() {
            let c = f.coeff(&[k]).sub(&err);
            f.set(vec![k], c);
        }
    }
    Ok(f)
}

/// `φ(CPⁿ)` from the multiplicative sequence of `x/f(x)`, `f = g^{−1}`,
/// evaluated on `p(CPⁿ) = (1 + h²)^{n+1}`.
pub fn ochanine_cp_pontryagin(n: u32) -> Result<GenusPoly> {
    if n % 2 == 1 {
        return Ok(GenusPoly::zero());
    }
    let half = n / 2;
    let f = reversion(&ochanine_log(n + 1), n + 1)?;
    let q = f.divide_by_variable()?.invert()?;
    let even = TruncSeries::univariate("u", half, (0..=half).map(|k| q.coeff(&[2 * k])));
    let product = chern_root_product(&even, half as usize, half)?;
    let mut out = GenusPoly::zero();
    for (exps, c) in product.terms() {
        let weight: u32 = exps
            .iter()
            .enumerate()
            .map(|(i, e)| (i as u32 + 1) * e)
            .sum();
        if weight != half {
            continue;
        }
        let mut value = Rat::one();
        for (i, &e) in exps.iter().enumerate() {
            let p = binomial(&int(i64::from(n + 1)), i as u32 + 1);
            for _ in 0..e {
                value *= &p;
            }
        }
        out = out.add(&c.scale(&value));
    }
    Ok(out)
}

/// Whether the `δ, γ` coefficients `c_{i,j}` are integers divisible by
/// `2^{popcount(j)}`, i.e. membership in `ℤ[δ, 2γ, 2γ², 2γ⁴, …]`.
pub fn in_image_ring(p: &GenusPoly) -> bool {
    p.gamma_coefficients().iter().all(|((_, j), c)| {
        c.is_integer() && (c.to_integer() % (BigInt::one() << j.count_ones())).is_zero()
    })
}

/// Integer lattice membership by Hermite reduction of the generators.
pub fn lattice_contains(generators: &[Vec<BigInt>], target: &[BigInt]) -> bool {
    let cols = target.len();
    let mut rows: Vec<Vec<BigInt>> = generators.to_vec();
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for col in 0..cols {
        loop {
            let live: Vec<usize> = (0..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if live.len() <= 1 {
                if let Some(&r) = live.first() {
                    pivots.push((col, rows.swap_remove(r)));
                }
                break;
            }
            let best = *live.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            let pivot = rows[best].clone();
            for &r in &live {
                if r != best {
                    let q = rows[r][col].div_floor(&pivot[col]);
                    for (x, y) in rows[r].iter_mut().zip(&pivot) {
                        *x -= &q * y;
                    }
                }
            }
        }
    }
    let mut t = target.to_vec();
    for (col, row) in &pivots {
        let (q, r) = t[*col].div_rem(&row[*col]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in t.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    t.iter().all(Zero::is_zero)
}

/// Whether `target`, homogeneous of weight `d` in `δ` (1) and `γ` (2),
/// is an integer polynomial in `φ(CP²), φ(CP⁴), …, φ(CP^{2d})`.
pub fn in_cp_subring(target: &GenusPoly) -> Result<bool> {
    let w = target.weights();
    let d = match w.as_slice() {
        [] => return Ok(true),
        [d] => *d,
        _ => {
            return Err(Error::input(format!("{target} is not homogeneous")));
        }
    };
    let basis: Vec<(u32, u32)> = (0..=d / 2).map(|j| (d - 2 * j, j)).collect();
    let vector = |p: &GenusPoly| -> Option<Vec<BigInt>> {
        let c = p.gamma_coefficients();
        basis
            .iter()
            .map(|k| {
                let x = c.get(k).cloned().unwrap_or_else(Rat::zero);
                x.is_integer().then(|| x.to_integer())
            })
            .collect()
    };
    let Some(t) = vector(target) else {
        return Ok(false);
    };
    let images: Vec<GenusPoly> = (1..=d).map(|k| ochanine_cp(2 * k)).collect();
    let mut gens = Vec::new();
    for p in partitions(d) {
        let m = p.iter().fold(GenusPoly::one_elem(), |acc, &k| {
            acc.mul(&images[k as usize - 1])
        });
        gens.push(vector(&m).ok_or_else(|| {
            Error::internal(
                "integral_image",
                format!("{m} has non-integral gamma coefficients"),
            )
        })?);
    }
    Ok(lattice_contains(&gens, &t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_gamma_pow(k: u32) -> GenusPoly {
        GenusPoly::gamma().pow(k).scale(&int(2))
    }

    #[test]
    fn low_dimensional_values() {
        assert_eq!(ochanine_cp(0), GenusPoly::one_elem());
        assert_eq!(ochanine_cp(2), GenusPoly::delta());
        let expected = GenusPoly::gamma()
            .scale(&int(2))
            .add(&GenusPoly::delta().pow(2));
        assert_eq!(ochanine_cp(4), expected);
        assert_eq!(ochanine_cp(4).render_gamma(), "2*gamma + delta^2");
        assert_eq!(ochanine_cp(4).to_string(), "-1/2*epsilon + 3/2*delta^2");
        assert!(ochanine_cp(3).is_zero());
    }

    #[test]
    fn two_routes_agree() {
        for n in 0..=8 {
            assert_eq!(ochanine_cp_pontryagin(n).unwrap(), ochanine_cp(n), "CP{n}");
        }
    }

    #[test]
    fn reversion_inverts() {
        let g = ochanine_log(7);
        let f = reversion(&g, 7).unwrap();
        let x = TruncSeries::univariate("t", 7, [GenusPoly::zero(), GenusPoly::one_elem()]);
        assert_eq!(compose(&g, &f), x);
        assert_eq!(compose(&f, &g), x);
    }

    #[test]
    fn image_ring_membership() {
        for k in 0..=6 {
            assert!(in_image_ring(&ochanine_cp(2 * k)), "CP{}", 2 * k);
        }
        assert!(in_image_ring(&two_gamma_pow(1)));
        assert!(in_image_ring(&two_gamma_pow(2)));
        assert!(!in_image_ring(&GenusPoly::gamma()));
        assert!(!in_image_ring(&two_gamma_pow(3)));
        assert!(in_image_ring(&two_gamma_pow(3).scale(&int(2))));
    }

    #[test]
    fn generated_subring() {
        assert!(in_cp_subring(&two_gamma_pow(1)).unwrap());
        assert!(in_cp_subring(&two_gamma_pow(2)).unwrap());
        assert!(!in_cp_subring(&GenusPoly::gamma()).unwrap());
        assert!(!in_cp_subring(&GenusPoly::gamma().pow(2)).unwrap());
        assert!(in_cp_subring(&GenusPoly::delta().pow(3)).unwrap());
        assert!(in_cp_subring(&GenusPoly::delta().add(&GenusPoly::gamma())).is_err());
    }

    #[test]
    fn lattice_oracle() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let gens = vec![b(&[2, 0]), b(&[0, 3]), b(&[4, 6])];
        assert!(lattice_contains(&gens, &b(&[6, -9])));
        assert!(!lattice_contains(&gens, &b(&[1, 0])));
        assert!(lattice_contains(&[b(&[3, 1]), b(&[5, 2])], &b(&[1, 0])));
    }
}
