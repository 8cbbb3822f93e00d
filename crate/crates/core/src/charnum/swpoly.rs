use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Monomial `w_{j1} w_{j2} …` stored as its indices in decreasing order.
pub type SwMonomial = Vec<u32>;

/// Polynomial over F₂ in the graded symbols `w_i` (`deg w_i = i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SWPolynomial {
    terms: BTreeSet<SwMonomial>,
}

fn normal(mut m: SwMonomial) -> SwMonomial {
    m.retain(|&j| j > 0);
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Degree of a monomial.
pub fn monomial_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl SWPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new())
    }

    /// `w_i`, with `w_0 = 1`.
    pub fn w(i: u32) -> Self {
        Self::monomial(vec![i])
    }

    pub fn monomial(m: SwMonomial) -> Self {
        Self {
            terms: BTreeSet::from([normal(m)]),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &SwMonomial> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees of the nonzero homogeneous pieces.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.iter().map(|m| monomial_degree(m)).collect()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|m| monomial_degree(m) == d)
                .cloned()
                .collect(),
        }
    }

    fn toggle(&mut self, m: SwMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(normal(a.iter().chain(b).copied().collect()));
            }
        }
        out
    }

    /// Product keeping only terms of degree at most `cap`.
    fn mul_capped(&self, other: &Self, cap: u32) -> Self {
        let mut out = Self::zero();
        for a in &self.terms {
            let da = monomial_degree(a);
            for b in &other.terms {
                if da + monomial_degree(b) <= cap {
                    out.toggle(normal(a.iter().chain(b).copied().collect()));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Parses sums of products such as `w1^2 w2 + w3`, `w1*w4` or `1`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Self::zero();
        for term in s.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::input(format!("empty term in `{s}`")));
            }
            if term == "0" {
                continue;
            }
            if term == "1" {
                out.toggle(Vec::new());
                continue;
            }
            let mut m = Vec::new();
            for factor in term.split(|c: char| c == '*' || c.is_whitespace()) {
                if factor.is_empty() {
                    continue;
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (
                        b,
                        e.parse::<u32>()
                            .map_err(|_| Error::input(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = base
                    .strip_prefix('w')
                    .and_then(|i| i.parse::<u32>().ok())
                    .ok_or_else(|| Error::input(format!("expected w<i>, found `{base}`")))?;
                m.extend(std::iter::repeat_n(idx, exp as usize));
            }
            out.toggle(normal(m));
        }
        Ok(out)
    }
}

fn fmt_monomial(m: &[u32]) -> String {
    if m.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let j = m[i..].iter().take_while(|&&x| x == m[i]).count();
        parts.push(if j == 1 {
            format!("w{}", m[i])
        } else {
            format!("w{}^{j}", m[i])
        });
        i += j;
    }
    parts.reverse();
    parts.join(" ")
}

impl fmt::Display for SWPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<&SwMonomial> = self.terms.iter().collect();
        terms.sort_by(|a, b| monomial_degree(a).cmp(&monomial_degree(b)).then(a.cmp(b)));
        let s: Vec<String> = terms.iter().map(|m| fmt_monomial(m)).collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// `C(a, b) mod 2` for `a, b ≥ 0` by Lucas' theorem.
pub(crate) fn binomial_mod2(a: u32, b: u32) -> bool {
    b & !a == 0
}

/// `Sq^i w_j = Σ_t C(j−i+t−1, t) w_{i−t} w_{j+t}` (Wu's formula).
fn sq_w(i: u32, j: u32) -> SWPolynomial {
    if i == 0 {
        return SWPolynomial::w(j);
    }
    if i > j {
        return SWPolynomial::zero();
    }
    if i == j {
        return SWPolynomial::monomial(vec![j, j]);
    }
    let mut out = SWPolynomial::zero();
    for t in 0..=i {
        if binomial_mod2(j - i + t - 1, t) {
            out.toggle(normal(vec![i - t, j + t]));
        }
    }
    out
}

/// `Sq^i p`, extended from `w_j` by linearity and the Cartan formula.
pub fn steenrod_sq(i: u32, p: &SWPolynomial) -> SWPolynomial {
    let mut out = SWPolynomial::zero();
    for m in p.terms() {
        let target = monomial_degree(m) + i;
        let mut acc = SWPolynomial::one();
        for &j in m {
            let total = (0..=j).fold(SWPolynomial::zero(), |s, k| s.add(&sq_w(k, j)));
            acc = acc.mul_capped(&total, target);
        }
        out = out.add(&acc.homogeneous_part(target));
    }
    out
}

/// Wu classes `v_0, …, v_max`, solving `w_k = Σ_i Sq^{k−i} v_i`.
pub fn wu_classes(max: u32) -> Vec<SWPolynomial> {
    let mut v = vec![SWPolynomial::one()];
    for k in 1..=max {
        let mut vk = SWPolynomial::w(k);
        for i in k.div_ceil(2)..k {
            vk = vk.add(&steenrod_sq(k - i, &v[i as usize]));
        }
        v.push(vk);
    }
    v
}

/// The Wu class `v_i` as a polynomial in Stiefel–Whitney classes.
pub fn wu_class(i: u32) -> SWPolynomial {
    wu_classes(i).pop().unwrap_or_else(SWPolynomial::one)
}

/// Power-sum class `s_k = Σ x^k` over the formal roots of `w`, by Newton's
/// identities mod 2.
pub fn s_class(k: u32) -> SWPolynomial {
    let mut s = vec![SWPolynomial::zero()];
    for n in 1..=k {
        let mut acc = if n % 2 == 1 {
            SWPolynomial::w(n)
        } else {
            SWPolynomial::zero()
        };
        for i in 1..n {
            acc = acc.add(&SWPolynomial::w(i).mul(&s[(n - i) as usize]));
        }
        s.push(acc);
    }
    s.pop().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SWPolynomial {
        SWPolynomial::parse(s).unwrap()
    }

    #[test]
    fn wu_formula_examples() {
        assert_eq!(steenrod_sq(1, &p("w1")), p("w1^2"));
        assert_eq!(steenrod_sq(1, &p("w2")), p("w1 w2 + w3"));
        assert_eq!(steenrod_sq(0, &p("w1 w3 + w4")), p("w1 w3 + w4"));
        assert_eq!(steenrod_sq(5, &p("w2")), SWPolynomial::zero());
    }

    #[test]
    fn cartan_on_a_square() {
        // Sq^2(w1^2) = (Sq^1 w1)^2 = w1^4
        assert_eq!(steenrod_sq(2, &p("w1^2")), p("w1^4"));
        assert_eq!(steenrod_sq(1, &p("w1^2")), SWPolynomial::zero());
    }

    #[test]
    fn low_wu_classes() {
        assert_eq!(wu_class(0), SWPolynomial::one());
        assert_eq!(wu_class(1), p("w1"));
        assert_eq!(wu_class(2), p("w2 + w1^2"));
        assert_eq!(wu_class(3), p("w1 w2"));
    }

    #[test]
    fn total_square_of_wu_class_is_w() {
        let v = wu_classes(10);
        for k in 0..=10u32 {
            let total = (0..=k).fold(SWPolynomial::zero(), |acc, i| {
                acc.add(&steenrod_sq(k - i, &v[i as usize]))
            });
            assert_eq!(
                total,
                if k == 0 {
                    SWPolynomial::one()
                } else {
                    SWPolynomial::w(k)
                }
            );
        }
    }

    #[test]
    fn adem_relation_sq1_sq1() {
        for j in 1..=6 {
            let once = steenrod_sq(1, &SWPolynomial::w(j));
            assert!(steenrod_sq(1, &once).is_zero(), "Sq1 Sq1 w{j}");
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        let x = p("w3 + w1^2 w2 + 1");
        assert_eq!(x.to_string(), "1 + w3 + w1^2 w2");
        assert_eq!(p(&x.to_string()), x);
        assert!(SWPolynomial::parse("v2").is_err());
    }

    #[test]
    fn newton_power_sums() {
        assert_eq!(s_class(1), p("w1"));
        assert_eq!(s_class(2), p("w1^2"));
        assert_eq!(s_class(3), p("w1^3 + w1 w2 + w3"));
    }
}
