use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{Coeff, FracPoly, Rat, UniPoly};
use crate::error::{Error, Result};

/// Rational function in one variable with rational exponents, kept in a
/// canonical reduced form.
///
/// With `N` the common exponent denominator and `t = x^(1/N)`, numerator
/// and denominator are coprime polynomials in `t` with nonnegative exponents
/// and the denominator is monic. The form does not depend on the choice of
/// `N`, so two values are equal exactly when their fields are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: FracPoly,
    den: FracPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self {
            num: FracPoly::zero(),
            den: FracPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self {
            num: FracPoly::one(),
            den: FracPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_laurent(FracPoly::constant(c))
    }

    /// Canonical representative of `n / d`.
    pub fn normalize(n: &FracPoly, d: &FracPoly) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if n.is_zero() {
            return Ok(Self::zero());
        }
        if d.is_monomial() {
            let (e, c) = d.terms().next().expect("monomial");
            return Ok(Self::from_laurent(n.shift(&-e).scale(&c.recip())));
        }

        let lattice = super::lcm(&n.exponent_denominator(), &d.exponent_denominator());
        let low = n
            .lowest_exponent()
            .min(d.lowest_exponent())
            .expect("nonzero")
            .clone();
        let lattice_rat = Rat::from_integer(lattice.clone());
        let to_dense = |p: &FracPoly| -> UniPoly {
            let idx = |e: &Rat| -> usize {
                ((e - &low) * &lattice_rat)
                    .to_integer()
                    .to_usize()
                    .expect("exponent span fits in memory")
            };
            let len = p.highest_exponent().map_or(0, |e| idx(e) + 1);
            let mut v = vec![Rat::zero(); len];
            for (e, c) in p.terms() {
                v[idx(e)] = c.clone();
            }
            UniPoly::new(v)
        };
        let pn = to_dense(n);
        let pd = to_dense(d);
        let g = pn.gcd(&pd);
        let (rn, _) = pn.div_rem(&g);
        let (rd, _) = pd.div_rem(&g);
        let lead = rd.lead().expect("nonzero denominator").recip();
        let back = |p: &UniPoly| -> FracPoly {
            FracPoly::from_terms(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (Rat::new(BigInt::from(i), lattice.clone()), c * &lead)),
            )
        };
        Ok(Self {
            num: back(&rn),
            den: back(&rd),
        })
    }

    /// Canonical form of a Laurent polynomial (monomial denominator).
    pub fn from_laurent(l: FracPoly) -> Self {
        let shift = match l.lowest_exponent() {
            None => return Self::zero(),
            Some(e) if e < &Rat::zero() => -e.clone(),
            Some(_) => Rat::zero(),
        };
        if shift.is_zero() {
            return Self {
                num: l,
                den: FracPoly::one(),
            };
        }
        Self {
            num: l.shift(&shift),
            den: FracPoly::monomial(Rat::one(), shift),
        }
    }

    pub fn from_poly(p: FracPoly) -> Self {
        Self::from_laurent(p)
    }

    pub fn numer(&self) -> &FracPoly {
        &self.num
    }

    pub fn denom(&self) -> &FracPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&FracPoly> {
        self.den.is_constant().then_some(&self.num)
    }

    /// Laurent expansion when the denominator is a monomial.
    pub fn as_laurent(&self) -> Option<FracPoly> {
        if !self.den.is_monomial() {
            return None;
        }
        let (e, _) = self.den.terms().next()?;
        Some(self.num.shift(&-e))
    }

    pub fn add(&self, other: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_laurent(), other.as_laurent()) {
            return Self::from_laurent(&a + &b);
        }
        if self.den == other.den {
            return Self::normalize(&(&self.num + &other.num), &self.den).expect("nonzero den");
        }
        Self::normalize(
            &(&(&self.num * &other.den) + &(&other.num * &self.den)),
            &(&self.den * &other.den),
        )
        .expect("nonzero den")
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let (Some(a), Some(b)) = (self.as_laurent(), other.as_laurent()) {
            return Self::from_laurent(&a * &b);
        }
        Self::normalize(&(&self.num * &other.num), &(&self.den * &other.den)).expect("nonzero den")
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(r),
            den: self.den.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::normalize(&self.den, &self.num)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Substitutes `x ↦ x^s` for nonzero rational `s`.
    pub fn substitute_power(&self, s: &Rat) -> Self {
        Self::normalize(&self.num.substitute_power(s), &self.den.substitute_power(s))
            .expect("substitution keeps the denominator nonzero")
    }

    /// Exact value at `x`; fails where the reduced denominator vanishes.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(x)? / d)
    }

    /// Limit at `x = 1`, which exists iff the reduced denominator does not
    /// vanish there.
    pub fn value_at_one(&self) -> Option<Rat> {
        let d = self.den.coefficient_sum();
        (!d.is_zero()).then(|| self.num.coefficient_sum() / d)
    }

    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        Display { f: self, var }
    }
}

struct Display<'a> {
    f: &'a RatFunc,
    var: &'a str,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.f.as_laurent() {
            return write!(f, "{}", l.display_in(self.var));
        }
        write!(
            f,
            "({})/({})",
            self.f.num.display_in(self.var),
            self.f.den.display_in(self.var)
        )
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("q"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.display_in("x"))
    }
}

impl From<FracPoly> for RatFunc {
    fn from(p: FracPoly) -> Self {
        Self::from_laurent(p)
    }
}

impl Coeff for RatFunc {
    fn zero_elem() -> Self {
        RatFunc::zero()
    }
    fn one_elem() -> Self {
        RatFunc::one()
    }
    fn is_zero_elem(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add_elem(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn neg_elem(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul_elem(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn scale_by(&self, r: &Rat) -> Self {
        RatFunc::scale(self, r)
    }
    fn inverse_elem(&self) -> Option<Self> {
        RatFunc::inverse(self).ok()
    }
    fn from_rat(r: &Rat) -> Self {
        RatFunc::constant(r.clone())
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}

impl std::ops::Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        RatFunc::mul(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn poly(terms: &[(Rat, i64)]) -> FracPoly {
        FracPoly::from_terms(terms.iter().map(|(e, c)| (e.clone(), int(*c))))
    }

    #[test]
    fn cancels_common_linear_factor() {
        let n = FracPoly::from_coeffs([-1, 1]);
        let d = FracPoly::from_coeffs([-1, 0, 1]);
        let f = RatFunc::normalize(&n, &d).unwrap();
        assert_eq!(f.numer(), &FracPoly::one());
        assert_eq!(f.denom(), &FracPoly::from_coeffs([1, 1]));
    }

    #[test]
    fn half_integer_lattice() {
        // (q - 1) / (q^(3/2) - 1) = (q^(1/2) + 1) / (q + q^(1/2) + 1)
        let n = FracPoly::from_coeffs([-1, 1]);
        let d = poly(&[(int(0), -1), (rat(3, 2), 1)]);
        let f = RatFunc::normalize(&n, &d).unwrap();
        assert_eq!(f.numer(), &poly(&[(int(0), 1), (rat(1, 2), 1)]));
        assert_eq!(
            f.denom(),
            &poly(&[(int(0), 1), (rat(1, 2), 1), (int(1), 1)])
        );
        assert_eq!(f.to_string(), "(q^(1/2) + 1)/(q + q^(1/2) + 1)");
    }

    #[test]
    fn zero_numerator_and_denominator() {
        let f = RatFunc::normalize(&FracPoly::zero(), &FracPoly::from_coeffs([3, 1])).unwrap();
        assert_eq!(f, RatFunc::zero());
        assert_eq!(f.denom(), &FracPoly::one());
        assert_eq!(
            RatFunc::normalize(&FracPoly::one(), &FracPoly::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn laurent_and_general_paths_agree() {
        let l = poly(&[(int(-2), 3), (int(1), 1)]);
        let via_laurent = RatFunc::from_laurent(l.clone());
        let via_gcd = RatFunc::normalize(
            &(&l * &FracPoly::from_coeffs([1, 1])),
            &FracPoly::from_coeffs([1, 1]),
        )
        .unwrap();
        assert_eq!(via_laurent, via_gcd);
        assert_eq!(via_laurent.to_string(), "q + 3*q^(-2)");
    }

    #[test]
    fn limit_at_one() {
        // (q-1)/(q^2-1) -> 1/2
        let f = RatFunc::normalize(
            &FracPoly::from_coeffs([-1, 1]),
            &FracPoly::from_coeffs([-1, 0, 1]),
        )
        .unwrap();
        assert_eq!(f.value_at_one(), Some(rat(1, 2)));
        let pole = RatFunc::normalize(&FracPoly::one(), &FracPoly::from_coeffs([-1, 1])).unwrap();
        assert_eq!(pole.value_at_one(), None);
        assert!(pole.eval(&int(1)).is_err());
        assert_eq!(pole.eval(&int(3)).unwrap(), rat(1, 2));
    }
}
