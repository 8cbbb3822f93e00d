//! Exact arithmetic kernel.
//!
//! Everything downstream is computed over the rationals: univariate
//! polynomials whose exponents may be arbitrary rationals ([`FracPoly`]),
//! canonical rational functions in one such variable ([`RatFunc`]), and
//! truncated multivariate power series over any [`Coeff`] ring
//! ([`TruncSeries`]).

mod fracpoly;
mod ratfunc;
mod series;
mod unipoly;

pub use fracpoly::FracPoly;
pub use ratfunc::RatFunc;
pub use series::{long_division_inverse, TruncSeries};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::input(format!("`{s}` is not a rational number")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
    }
}

pub(crate) fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Binomial coefficient as an exact rational; `n` may be any rational.
pub fn binomial(n: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * (n - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub(crate) fn factorial(k: u32) -> Rat {
    (1..=k as i64).fold(Rat::one(), |acc, i| acc * int(i))
}

/// Exact `x^e` for a rational exponent, or an error when the root is not
/// rational.
pub fn rat_pow(x: &Rat, e: &Rat) -> Result<Rat> {
    let num_e = e.numer();
    let den_e = e.denom();
    if x.is_zero() {
        return if e.is_negative() {
            Err(Error::ZeroDenominator)
        } else if e.is_zero() {
            Ok(Rat::one())
        } else {
            Ok(Rat::zero())
        };
    }
    let base = if den_e.is_one() {
        x.clone()
    } else {
        if x.is_negative() {
            return Err(Error::InexactRoot(format!(
                "({x})^({e}) of a negative base"
            )));
        }
        let k: u32 = den_e
            .try_into()
            .map_err(|_| Error::InexactRoot(format!("root index {den_e} too large")))?;
        let root = |v: &BigInt| -> Option<BigInt> {
            let r = v.nth_root(k);
            (num_traits::pow(r.clone(), k as usize) == *v).then_some(r)
        };
        match (root(x.numer()), root(x.denom())) {
            (Some(n), Some(d)) => Rat::new(n, d),
            _ => return Err(Error::InexactRoot(format!("({x})^({e})"))),
        }
    };
    let p: i64 = num_e
        .try_into()
        .map_err(|_| Error::input(format!("exponent {e} too large")))?;
    let mag = num_traits::pow(base, p.unsigned_abs() as usize);
    if p < 0 {
        Ok(mag.recip())
    } else {
        Ok(mag)
    }
}

/// Coefficient rings usable inside [`TruncSeries`] and the cohomology
/// calculus. Zero and one are context free; truncated coefficient types
/// treat them as exact.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn scale_by(&self, r: &Rat) -> Self;
    /// Multiplicative inverse, if it exists in the ring.
    fn inverse_elem(&self) -> Option<Self>;

    fn sub_elem(&self, other: &Self) -> Self {
        self.add_elem(&other.neg_elem())
    }

    fn from_rat(r: &Rat) -> Self {
        Self::one_elem().scale_by(r)
    }
}

impl Coeff for Rat {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_by(&self, r: &Rat) -> Self {
        self * r
    }
    fn inverse_elem(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rat("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -4 ").unwrap(), int(-4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn rational_powers() {
        assert_eq!(rat_pow(&int(4), &rat(1, 2)).unwrap(), int(2));
        assert_eq!(rat_pow(&rat(8, 27), &rat(-2, 3)).unwrap(), rat(9, 4));
        assert!(matches!(
            rat_pow(&int(2), &rat(1, 2)),
            Err(Error::InexactRoot(_))
        ));
        assert!(rat_pow(&int(0), &int(-1)).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&rat(-1, 2), 2), rat(3, 8));
        assert_eq!(binomial(&int(-1), 0), int(1));
    }
}
