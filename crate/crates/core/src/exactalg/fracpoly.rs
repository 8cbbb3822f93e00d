use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{lcm, rat_pow, Coeff, Rat};
use crate::error::Result;

/// Finite sum `Σ c_e x^e` with rational exponents `e`.
///
/// The variable is not stored; callers name it when formatting
/// (see [`FracPoly::display_in`]). Zero coefficients are never stored, so
/// derived equality is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FracPoly {
    terms: BTreeMap<Rat, Rat>,
}

impl FracPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, Rat::zero())
    }

    pub fn monomial(c: Rat, e: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::monomial(Rat::one(), Rat::one())
    }

    /// Integer-exponent polynomial from dense coefficients, lowest first.
    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| {
            (
                Rat::from_integer(BigInt::from(i)),
                Rat::from_integer(c.into()),
            )
        }))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rat, Rat)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, e: Rat, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Rat, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Rat) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Zero::is_zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Rat::zero())
    }

    pub fn lowest_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    pub fn highest_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next_back()
    }

    /// Coefficient at the highest exponent.
    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.values().next_back()
    }

    /// Least common multiple of the exponent denominators (1 for the zero
    /// polynomial).
    pub fn exponent_denominator(&self) -> BigInt {
        self.terms
            .keys()
            .fold(BigInt::one(), |acc, e| lcm(&acc, e.denom()))
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.is_integer())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    /// Multiplies by `x^e`.
    pub fn shift(&self, e: &Rat) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// Substitutes `x ↦ x^s` for a nonzero rational `s`.
    pub fn substitute_power(&self, s: &Rat) -> Self {
        assert!(!s.is_zero(), "substitution x -> x^0 is not invertible");
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * s, c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            acc += c * rat_pow(x, e)?;
        }
        Ok(acc)
    }

    /// Sum of coefficients, i.e. the value at `x = 1`.
    pub fn coefficient_sum(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |acc, c| acc + c)
    }

    /// Formats with the given variable name, terms in decreasing exponent.
    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        Display { poly: self, var }
    }
}

struct Display<'a> {
    poly: &'a FracPoly,
    var: &'a str,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            f.write_str(self.var)?;
            if e.is_one() {
                continue;
            }
            if e.is_integer() && e.is_positive() {
                write!(f, "^{e}")?;
            } else {
                write!(f, "^({e})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FracPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("q"))
    }
}

impl fmt::Debug for FracPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FracPoly({})", self.display_in("x"))
    }
}

impl Add for &FracPoly {
    type Output = FracPoly;
    fn add(self, rhs: &FracPoly) -> FracPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FracPoly {
    type Output = FracPoly;
    fn sub(self, rhs: &FracPoly) -> FracPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &FracPoly {
    type Output = FracPoly;
    fn mul(self, rhs: &FracPoly) -> FracPoly {
        let mut out = FracPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &FracPoly {
    type Output = FracPoly;
    fn neg(self) -> FracPoly {
        FracPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for FracPoly {
            type Output = FracPoly;
            fn $m(self, rhs: FracPoly) -> FracPoly { (&self).$m(&rhs) }
        }
        impl $tr<&FracPoly> for FracPoly {
            type Output = FracPoly;
            fn $m(self, rhs: &FracPoly) -> FracPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for FracPoly {
    type Output = FracPoly;
    fn neg(self) -> FracPoly {
        -&self
    }
}

impl Coeff for FracPoly {
    fn zero_elem() -> Self {
        FracPoly::zero()
    }
    fn one_elem() -> Self {
        FracPoly::one()
    }
    fn is_zero_elem(&self) -> bool {
        FracPoly::is_zero(self)
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
        FracPoly::scale(self, r)
    }
    fn inverse_elem(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(FracPoly::monomial(c.recip(), -e))
    }
}
