//! Jacobi theta function in product form.
//!
//! `θ(z, τ) = −i q^{1/8} (w^{1/2} − w^{−1/2}) Π_{n≥1} (1 − qⁿ)(1 − qⁿw)(1 − qⁿ/w)`
//! with `w = e^{2πiz}` and `q = e^{2πiτ}`. Every ratio used by the genus has
//! as many theta factors upstairs as downstairs, so the prefactor `−i q^{1/8}`
//! cancels; [`ThetaSeries`] stores the reduced function `θ̃` without it.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::jacobi::JacobiSeries;
use crate::exactalg::{factorial, int, rat, FracPoly, Rat, RatFunc, TruncSeries};

/// Coefficients of `θ̃` as Laurent polynomials in `w`, indexed by the power
/// of `q`, modulo `q^{order+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSeries {
    order: u32,
    coeffs: Vec<FracPoly>,
}

pub fn theta_expand(order: u32) -> ThetaSeries {
    let len = order as usize + 1;
    let mut coeffs = vec![FracPoly::zero(); len];
    coeffs[0] = FracPoly::from_terms([(rat(1, 2), int(1)), (rat(-1, 2), int(-1))]);
    for n in 1..len {
        for x in [
            FracPoly::one(),
            FracPoly::x(),
            FracPoly::monomial(int(1), int(-1)),
        ] {
            let old = coeffs.clone();
            for k in n..len {
                coeffs[k] = &coeffs[k] - &(&x * &old[k - n]);
            }
        }
    }
    ThetaSeries { order, coeffs }
}

impl ThetaSeries {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficient of `q^n` as a Laurent polynomial in `w`.
    pub fn coeff(&self, n: usize) -> &FracPoly {
        &self.coeffs[n]
    }

    /// `d/dy θ̃(e^y w)` at `y = 0`, i.e. `w ∂_w θ̃`.
    pub fn derivative(&self) -> ThetaSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| FracPoly::from_terms(p.terms().map(|(e, c)| (e.clone(), c * e))))
            .collect();
        ThetaSeries {
            order: self.order,
            coeffs,
        }
    }

    fn substitute(p: &FracPoly, c: &Rat) -> RatFunc {
        if c.is_zero() {
            RatFunc::constant(p.coefficient_sum())
        } else {
            RatFunc::from(p.substitute_power(c))
        }
    }

    /// `θ̃(ζ^c)`.
    pub fn at_monomial(&self, c: &Rat) -> JacobiSeries {
        JacobiSeries::truncated(
            self.order,
            self.coeffs.iter().map(|p| Self::substitute(p, c)).collect(),
        )
    }

    /// `θ̃(ζ^c e^y)` as a power series in `y` up to `y^cap`.
    pub fn shifted(&self, c: &Rat, cap: u32) -> TruncSeries<JacobiSeries> {
        let coeffs = (0..=cap).map(|j| {
            let fact = factorial(j);
            let per_q = self
                .coeffs
                .iter()
                .map(|p| {
                    let taylor = FracPoly::from_terms(
                        p.terms().map(|(m, a)| (m.clone(), a * pow(m, j) / &fact)),
                    );
                    Self::substitute(&taylor, c)
                })
                .collect();
            JacobiSeries::truncated(self.order, per_q)
        });
        TruncSeries::univariate("y", cap, coeffs)
    }

    /// Numeric value of the full `θ(z, τ)`, prefactor included.
    pub fn eval(&self, z: Complex64, tau: Complex64) -> Complex64 {
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        let q = (two_pi_i * tau).exp();
        let mut total = Complex64::zero();
        let mut qn = Complex64::one();
        for p in &self.coeffs {
            let mut inner = Complex64::zero();
            for (e, a) in p.terms() {
                let e = to_f64(e);
                inner += to_f64(a) * (two_pi_i * z * e).exp();
            }
            total += qn * inner;
            qn *= q;
        }
        Complex64::new(0.0, -1.0) * (two_pi_i * tau / 8.0).exp() * total
    }
}

fn pow(x: &Rat, j: u32) -> Rat {
    (0..j).fold(Rat::one(), |acc, _| acc * x)
}

fn to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("finite rational")
}

/// `θ(z, τ) = −i Σ_n (−1)^n q^{(n+1/2)²/2} e^{2πi(n+1/2)z}`, summed over
/// `|n| ≤ terms`.
pub fn theta_lattice_sum(z: Complex64, tau: Complex64, terms: i64) -> Complex64 {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut total = Complex64::zero();
    for n in -terms..=terms {
        let h = n as f64 + 0.5;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        total += sign * (two_pi_i * (tau * h * h / 2.0 + z * h)).exp();
    }
    Complex64::new(0.0, -1.0) * total
}
