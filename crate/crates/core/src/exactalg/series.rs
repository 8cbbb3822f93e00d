use std::collections::BTreeMap;

use super::{Coeff, Rat};
use crate::error::{Error, Result};

/// Truncated multivariate power series with a weighted total-degree cap.
///
/// Every variable carries a positive weight; terms whose weighted degree
/// exceeds `cap` are dropped by every operation. Binary operations require
/// identical variable lists and use the smaller cap.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    vars: Vec<String>,
    weights: Vec<u32>,
    cap: u32,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> TruncSeries<C> {
    pub fn zero(vars: Vec<String>, weights: Vec<u32>, cap: u32) -> Self {
        assert_eq!(vars.len(), weights.len(), "one weight per variable");
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        Self {
            vars,
            weights,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vec<String>, weights: Vec<u32>, cap: u32, c: C) -> Self {
        let mut s = Self::zero(vars, weights, cap);
        let n = s.vars.len();
        s.set(vec![0; n], c);
        s
    }

    pub fn one_like(&self) -> Self {
        Self::constant(
            self.vars.clone(),
            self.weights.clone(),
            self.cap,
            C::one_elem(),
        )
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.vars.clone(), self.weights.clone(), self.cap)
    }

    /// Single-variable series of weight 1 from dense coefficients.
    pub fn univariate(var: &str, cap: u32, coeffs: impl IntoIterator<Item = C>) -> Self {
        let mut s = Self::zero(vec![var.to_string()], vec![1], cap);
        for (i, c) in coeffs.into_iter().enumerate() {
            s.set(vec![i as u32], c);
        }
        s
    }

    /// The `i`-th variable as a series.
    pub fn variable(&self, i: usize) -> Self {
        let mut s = self.zero_like();
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        s.set(e, C::one_elem());
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn degree_of(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// Stores `c` at `exps`, dropping it if zero or above the cap.
    pub fn set(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.vars.len());
        if c.is_zero_elem() || self.degree_of(&exps) > self.cap {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: C) {
        if c.is_zero_elem() || self.degree_of(&exps) > self.cap {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(slot) => {
                *slot = slot.add_elem(&c);
                if slot.is_zero_elem() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero_elem)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense coefficients of a univariate series, indices `0..=cap`.
    pub fn univariate_coeffs(&self) -> Vec<C> {
        assert_eq!(self.vars.len(), 1, "univariate series expected");
        let top = self.cap / self.weights[0];
        (0..=top).map(|i| self.coeff(&[i])).collect()
    }

    /// Lowers the cap.
    pub fn truncate(&self, cap: u32) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.weights.clone(), cap.min(self.cap));
        for (e, c) in &self.terms {
            out.set(e.clone(), c.clone());
        }
        out
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.vars == other.vars && self.weights == other.weights,
            "series over different variables: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.truncate(self.cap.min(other.cap));
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.set(e.clone(), c.neg_elem());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(
            self.vars.clone(),
            self.weights.clone(),
            self.cap.min(other.cap),
        );
        for (e1, c1) in &self.terms {
            let d1 = self.degree_of(e1);
            for (e2, c2) in &other.terms {
                if d1 + self.degree_of(e2) > out.cap {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.accumulate(e, c1.mul_elem(c2));
            }
        }
        out
    }

    /// Multiplies every coefficient by a ring element.
    pub fn mul_coeff(&self, c: &C) -> Self {
        let mut out = self.zero_like();
        for (e, a) in &self.terms {
            out.set(e.clone(), a.mul_elem(c));
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let mut out = self.zero_like();
        for (e, a) in &self.terms {
            out.set(e.clone(), a.scale_by(r));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(self.one_like(), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse up to the cap.
    ///
    /// Writing `s = c + r` with `r` of positive degree, the inverse is
    /// `c⁻¹ Σ_k (−c⁻¹ r)^k`, a finite sum because `r^k` has degree ≥ k.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.inverse_elem().ok_or(Error::NotInvertible)?;
        let mut rest = self.clone();
        rest.set(vec![0; self.vars.len()], C::zero_elem());
        let step = rest.mul_coeff(&inv0.neg_elem());
        let mut acc = self.one_like();
        let mut power = self.one_like();
        let min_weight = self.weights.iter().copied().min().unwrap_or(1);
        for _ in 0..=(self.cap / min_weight) {
            power = power.mul(&step);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.mul_coeff(&inv0))
    }

    /// Divides a univariate series by its variable; the constant term must
    /// vanish. The cap drops by the variable's weight.
    pub fn divide_by_variable(&self) -> Result<Self> {
        assert_eq!(self.vars.len(), 1, "univariate series expected");
        if !self.constant_term().is_zero_elem() {
            return Err(Error::NotInvertible);
        }
        let w = self.weights[0];
        let mut out = Self::zero(
            self.vars.clone(),
            self.weights.clone(),
            self.cap.saturating_sub(w),
        );
        for (e, c) in &self.terms {
            out.set(vec![e[0] - 1], c.clone());
        }
        Ok(out)
    }
}

/// Inverse of a univariate series given as dense coefficients, computed by
/// long division. Kept separate from [`TruncSeries::invert`] as an
/// independent check.
pub fn long_division_inverse(coeffs: &[Rat], cap: usize) -> Result<Vec<Rat>> {
    let c0 = coeffs.first().ok_or(Error::NotInvertible)?;
    if num_traits::Zero::is_zero(c0) {
        return Err(Error::NotInvertible);
    }
    let mut out: Vec<Rat> = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut acc = if n == 0 {
            Rat::from_integer(1.into())
        } else {
            Rat::from_integer(0.into())
        };
        for k in 1..=n {
            if let Some(a) = coeffs.get(k) {
                acc -= a * &out[n - k];
            }
        }
        out.push(acc / c0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn uni(c: &[Rat], cap: u32) -> TruncSeries<Rat> {
        TruncSeries::univariate("q", cap, c.iter().cloned())
    }

    #[test]
    fn geometric_series() {
        let s = uni(&[int(1), int(-1)], 3);
        let inv = s.invert().unwrap();
        assert_eq!(inv.univariate_coeffs(), vec![int(1); 4]);
    }

    #[test]
    fn identity_inverse() {
        let s = uni(&[int(1)], 5);
        assert_eq!(s.invert().unwrap(), s);
    }

    #[test]
    fn two_plus_q() {
        let s = uni(&[int(2), int(1)], 2);
        let inv = s.invert().unwrap();
        assert_eq!(
            inv.univariate_coeffs(),
            vec![rat(1, 2), rat(-1, 4), rat(1, 8)]
        );
        assert_eq!(
            long_division_inverse(&[int(2), int(1)], 2).unwrap(),
            inv.univariate_coeffs()
        );
    }

    #[test]
    fn non_invertible_constant() {
        let s = uni(&[int(0), int(1)], 2);
        assert_eq!(s.invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn weighted_cap_drops_terms() {
        let base: TruncSeries<Rat> =
            TruncSeries::zero(vec!["c1".into(), "c2".into()], vec![1, 2], 2);
        let c1 = base.variable(0);
        let c2 = base.variable(1);
        let p = c1.mul(&c1).add(&c2).mul(&c1);
        assert!(p.is_zero());
        assert_eq!(c1.mul(&c1).coeff(&[2, 0]), int(1));
    }

    #[test]
    fn divide_by_variable_shifts() {
        let s = uni(&[int(0), int(3), int(5)], 2);
        let d = s.divide_by_variable().unwrap();
        assert_eq!(d.cap(), 1);
        assert_eq!(d.univariate_coeffs(), vec![int(3), int(5)]);
        assert!(uni(&[int(1)], 2).divide_by_variable().is_err());
    }
}
