use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{Coeff, Rat, RatFunc};

/// Power series in `q` with coefficients rational functions of `ζ`.
///
/// `order = Some(Q)` means the series is known modulo `q^{Q+1}`;
/// `order = None` marks an exact polynomial in `q` (used for constants).
/// Binary operations keep the smaller order.
#[derive(Clone, PartialEq)]
pub struct JacobiSeries {
    order: Option<u32>,
    coeffs: Vec<RatFunc>,
}

fn min_order(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl JacobiSeries {
    pub fn exact(c: RatFunc) -> Self {
        Self::build(None, vec![c])
    }

    pub fn truncated(order: u32, coeffs: Vec<RatFunc>) -> Self {
        Self::build(Some(order), coeffs)
    }

    fn build(order: Option<u32>, mut coeffs: Vec<RatFunc>) -> Self {
        if let Some(q) = order {
            coeffs.truncate(q as usize + 1);
        }
        while coeffs.last().is_some_and(RatFunc::is_zero) {
            coeffs.pop();
        }
        Self { order, coeffs }
    }

    pub fn order(&self) -> Option<u32> {
        self.order
    }

    pub fn coeff(&self, n: usize) -> RatFunc {
        self.coeffs.get(n).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Coefficients of `q^0, …, q^Q`, padded with zeros up to the order.
    pub fn coeffs(&self) -> Vec<RatFunc> {
        let len = self.order.map_or(self.coeffs.len(), |q| q as usize + 1);
        (0..len).map(|n| self.coeff(n)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficientwise equality of `q^0, …, q^order`.
    pub fn agrees_through(&self, other: &Self, order: u32) -> bool {
        (0..=order as usize).all(|n| self.coeff(n) == other.coeff(n))
    }

    pub fn truncate(&self, order: u32) -> Self {
        Self::build(min_order(self.order, Some(order)), self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = min_order(self.order, other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::build(
            order,
            (0..len)
                .map(|n| self.coeff(n).add(&other.coeff(n)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::build(self.order, self.coeffs.iter().map(RatFunc::neg).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = min_order(self.order, other.order);
        if self.is_zero() || other.is_zero() {
            return Self::build(order, Vec::new());
        }
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(q) = order {
            len = len.min(q as usize + 1);
        }
        let mut out = vec![RatFunc::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::build(order, out)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::build(self.order, self.coeffs.iter().map(|c| c.scale(r)).collect())
    }

    /// Inverse up to the order. Exact series are invertible only when
    /// constant in `q`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.inverse()?;
        let order = match self.order {
            Some(q) => q,
            None if self.coeffs.len() <= 1 => return Ok(Self::exact(inv0)),
            None => return Err(Error::NotInvertible),
        };
        let mut out: Vec<RatFunc> = vec![inv0.clone()];
        for n in 1..=order as usize {
            let mut acc = RatFunc::zero();
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                acc = acc.add(&self.coeffs[k].mul(&out[n - k]));
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(Self::build(Some(order), out))
    }

    /// Applies a map to every coefficient.
    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        Self::build(self.order, self.coeffs.iter().map(f).collect())
    }

    /// `ζ ↦ ζ^{−1}` in every coefficient.
    pub fn invert_zeta(&self) -> Self {
        self.map(|c| c.substitute_power(&Rat::from_integer((-1).into())))
    }

    /// One line per power of `q`, `ζ` printed as `z`.
    pub fn render(&self) -> Vec<String> {
        self.coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| format!("q^{n}: {}", c.display_in("z")))
            .collect()
    }
}

impl fmt::Debug for JacobiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "JacobiSeries(order {:?}; {})",
            self.order,
            self.render().join("; ")
        )
    }
}

impl Coeff for JacobiSeries {
    fn zero_elem() -> Self {
        Self::build(None, Vec::new())
    }
    fn one_elem() -> Self {
        Self::exact(RatFunc::one())
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
        if r.is_zero() {
            return Self::build(self.order, Vec::new());
        }
        self.scale(r)
    }
    fn inverse_elem(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn from_rat(r: &Rat) -> Self {
        Self::exact(RatFunc::constant(r.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, FracPoly};

    fn series(order: u32, c: &[i64]) -> JacobiSeries {
        JacobiSeries::truncated(
            order,
            c.iter().map(|&x| RatFunc::constant(int(x))).collect(),
        )
    }

    #[test]
    fn inverse_of_one_minus_q() {
        let s = series(4, &[1, -1]);
        assert_eq!(s.inverse().unwrap(), series(4, &[1, 1, 1, 1, 1]));
        assert_eq!(s.mul(&s.inverse().unwrap()), series(4, &[1]));
    }

    #[test]
    fn orders_combine_to_the_minimum() {
        let a = series(2, &[1, 1, 1]);
        let b = series(5, &[1, 1]);
        assert_eq!(a.mul(&b).order(), Some(2));
        assert_eq!(a.mul(&JacobiSeries::one_elem()).order(), Some(2));
        assert_eq!(a.mul(&b).coeffs().len(), 3);
    }

    #[test]
    fn zeta_coefficients() {
        let z = RatFunc::from(FracPoly::x());
        let s = JacobiSeries::truncated(1, vec![z.clone(), RatFunc::one()]);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.coeff(0), z.inverse().unwrap());
        assert_eq!(inv.coeff(1), z.pow(2).inverse().unwrap().neg());
        assert!(series(3, &[0, 1]).inverse().is_err());
    }
}
