//! The two-variable elliptic genus of a resolution with exceptional
//! divisors, and the χ_y genus used to check its `q⁰` term.
//!
//! In the reduced theta function `θ̃` (see [`super::theta`]), with `y` a
//! Chern root and `e` a divisor class of discrepancy `a`, the integrand is
//!
//! ```text
//! Π_l  y θ̃'(0) θ̃(e^y ζ^{−1}) / (θ̃(ζ^{−1}) θ̃(e^y))
//! Π_k  θ̃(e^e ζ^{−(a+1)}) θ̃(ζ^{−1}) / (θ̃(e^e ζ^{−1}) θ̃(ζ^{−(a+1)}))
//! ```
//!
//! where `θ̃'` is the derivative in `y` through `w = e^y`.

use num_traits::{One, Zero};

use super::chern::chern_root_product;
use super::cohomology::CohomologyModel;
use super::jacobi::JacobiSeries;
use super::theta::ThetaSeries;
use crate::error::{Error, Result};
use crate::exactalg::{factorial, int, Coeff, FracPoly, Rat, TruncSeries};

/// Series in `y` of the Chern-root factor, up to `y^cap`.
pub fn root_factor(theta: &ThetaSeries, cap: u32) -> Result<TruncSeries<JacobiSeries>> {
    let minus_one = int(-1);
    let prime = theta.derivative().at_monomial(&Rat::zero());
    let numerator = theta.shifted(&minus_one, cap);
    let base = theta.at_monomial(&minus_one).inverse()?;
    let over_y = theta.shifted(&Rat::zero(), cap + 1).divide_by_variable()?;
    let over_y_inv = over_y.invert()?;
    Ok(numerator.mul(&over_y_inv).mul_coeff(&prime.mul(&base)))
}

/// Series in `e` of the divisor factor for discrepancy `a`, up to `e^cap`.
pub fn divisor_factor(theta: &ThetaSeries, a: &Rat, cap: u32) -> Result<TruncSeries<JacobiSeries>> {
    let shift = a + Rat::one();
    if shift <= Rat::zero() {
        return Err(Error::precondition(
            "log_terminal",
            format!("discrepancy {a} <= -1"),
        ));
    }
    let minus_one = int(-1);
    let top = theta.shifted(&-&shift, cap);
    let bottom = theta.shifted(&minus_one, cap).invert()?;
    let constant = theta
        .at_monomial(&minus_one)
        .mul(&theta.at_monomial(&-&shift).inverse()?);
    Ok(top.mul(&bottom).mul_coeff(&constant))
}

/// Substitutes a polynomial in Chern classes into the ring.
fn eval_chern<C: Coeff>(m: &CohomologyModel, s: &TruncSeries<C>) -> Vec<C> {
    let mut out = vec![C::zero_elem(); m.rank()];
    for (exps, c) in s.terms() {
        let mut v = m.unit();
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                v = m.mul_rat(&v, &m.pow_rat(&m.chern()[i], e));
            }
        }
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out[k] = out[k].add_elem(&c.scale_by(x));
            }
        }
    }
    out
}

/// Elliptic genus of the model through `q^order`.
pub fn bl_genus(m: &CohomologyModel, order: u32) -> Result<JacobiSeries> {
    for d in m.divisors() {
        if d.discrepancy <= -Rat::one() {
            return Err(Error::precondition(
                "log_terminal",
                format!(
                    "divisor `{}` has discrepancy {} <= -1",
                    d.name, d.discrepancy
                ),
            ));
        }
    }
    let dim = m.dimension();
    let theta = super::theta::theta_expand(order);
    let f = root_factor(&theta, dim)?;
    let roots = chern_root_product(&f, dim as usize, dim)?;
    let mut integrand = eval_chern(m, &roots);
    for d in m.divisors() {
        let factor = divisor_factor(&theta, &d.discrepancy, dim)?;
        let v = m.eval_series(&factor.univariate_coeffs(), &d.class);
        integrand = m.mul(&integrand, &v);
    }
    Ok(m.integrate(&integrand).truncate(order))
}

/// `χ_y = ∫ Π_l y_l (1 − y e^{−y_l}) / (1 − e^{−y_l})`, a polynomial in
/// `y`; for `ℙⁿ` it is `1 + y + … + yⁿ`.
pub fn chi_y(m: &CohomologyModel) -> Result<FracPoly> {
    if !m.divisors().is_empty() {
        return Err(Error::precondition(
            "no_divisors",
            "chi_y is defined on smooth models without divisors".to_string(),
        ));
    }
    let dim = m.dimension();
    let cap = dim;
    // (1 − e^{−x})/x = Σ (−1)^k x^k/(k+1)!
    let todd_den: TruncSeries<Rat> = TruncSeries::univariate(
        "x",
        cap,
        (0..=cap).map(|k| {
            let s = if k % 2 == 0 { int(1) } else { int(-1) };
            s / factorial(k + 1)
        }),
    );
    let todd = todd_den.invert()?;
    let y = FracPoly::x();
    let twist = TruncSeries::univariate(
        "x",
        cap,
        (0..=cap).map(|k| {
            let s = if k % 2 == 0 { int(1) } else { int(-1) };
            let exp = s / factorial(k);
            let mut t = -&y.scale(&exp);
            if k == 0 {
                t = &t + &FracPoly::one();
            }
            t
        }),
    );
    let todd_y: TruncSeries<FracPoly> = TruncSeries::univariate(
        "x",
        cap,
        todd.univariate_coeffs().into_iter().map(FracPoly::constant),
    );
    let q = todd_y.mul(&twist);
    let product = chern_root_product(&q, dim as usize, dim)?;
    Ok(m.integrate(&eval_chern(m, &product)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::cohomology::{blown_up_plane, projective_space};
    use crate::exactalg::RatFunc;

    fn model(spec: &crate::elliptic::cohomology::ModelSpec) -> CohomologyModel {
        CohomologyModel::new(spec).unwrap()
    }

    #[test]
    fn chi_y_of_projective_spaces() {
        for n in 0..=3 {
            let chi = chi_y(&model(&projective_space(n))).unwrap();
            assert_eq!(chi, FracPoly::from_coeffs(vec![1; n as usize + 1]));
        }
    }

    #[test]
    fn point_genus_is_one() {
        let g = bl_genus(&model(&projective_space(0)), 2).unwrap();
        assert_eq!(
            g.coeffs(),
            vec![RatFunc::one(), RatFunc::zero(), RatFunc::zero()]
        );
    }

    #[test]
    fn crepant_divisor_factor_is_one() {
        let theta = super::super::theta::theta_expand(2);
        let f = divisor_factor(&theta, &int(0), 2).unwrap();
        let one = f.one_like();
        for j in 0..=2u32 {
            assert!(f.coeff(&[j]).agrees_through(&one.coeff(&[j]), 2));
        }
    }

    #[test]
    fn lowest_term_is_chi_y() {
        for n in 1..=2u32 {
            let m = model(&projective_space(n));
            let g = bl_genus(&m, 1).unwrap();
            let one_minus = RatFunc::from(FracPoly::from_coeffs([1, -1]));
            let chi = RatFunc::from(chi_y(&m).unwrap());
            assert_eq!(g.coeff(0).mul(&one_minus.pow(n)), chi);
        }
    }

    #[test]
    fn blowup_of_the_plane() {
        let direct = bl_genus(&model(&projective_space(2)), 2).unwrap();
        let blown = bl_genus(&model(&blown_up_plane(int(1))), 2).unwrap();
        assert_eq!(direct, blown);
        let wrong = bl_genus(&model(&blown_up_plane(int(0))), 2).unwrap();
        assert_ne!(direct, wrong);
    }
}
