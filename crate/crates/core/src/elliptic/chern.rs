//! Symmetric functions of Chern roots.

use crate::error::{Error, Result};
use crate::exactalg::{int, Coeff, Rat, TruncSeries};

/// Variables `c1, …, c_rank` with weights `1, …, rank`.
pub fn chern_variables(rank: usize, cap: u32) -> TruncSeries<Rat> {
    TruncSeries::zero(
        (1..=rank).map(|i| format!("c{i}")).collect(),
        (1..=rank as u32).collect(),
        cap,
    )
}

/// Power sums `p_j = Σ_l y_l^j`, `j = 0..=cap`, in terms of `c_i`, by
/// Newton's identities.
pub fn power_sums(rank: usize, cap: u32) -> Vec<TruncSeries<Rat>> {
    let base = chern_variables(rank, cap);
    let c = |i: usize| {
        if i <= rank {
            base.variable(i - 1)
        } else {
            base.zero_like()
        }
    };
    let mut p = vec![base.one_like().scale(&int(rank as i64))];
    for j in 1..=cap as usize {
        let mut acc = c(j).scale(&int(j as i64));
        if (j - 1) % 2 == 1 {
            acc = acc.neg();
        }
        for i in 1..j {
            let term = c(i).mul(&p[j - i]);
            acc = if (i - 1) % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        p.push(acc);
    }
    p
}

fn lift<C: Coeff>(s: &TruncSeries<Rat>) -> TruncSeries<C> {
    let mut out = TruncSeries::zero(s.vars().to_vec(), s.weights().to_vec(), s.cap());
    for (e, c) in s.terms() {
        out.set(e.clone(), C::from_rat(c));
    }
    out
}

/// `Π_{l=1}^{rank} f(y_l)` as a series in the Chern classes `c_i` of
/// weighted degree at most `cap`.
///
/// With `f = f₀ + g`, the product is `Σ_k f₀^{rank−k} e_k(g(y_1), …)`; the
/// elementary symmetric functions of the values `g(y_l)` come from their
/// power sums `Σ_l g(y_l)^m = Σ_j [y^j](g^m) p_j` by Newton's identities.
pub fn chern_root_product<C: Coeff>(
    f: &TruncSeries<C>,
    rank: usize,
    cap: u32,
) -> Result<TruncSeries<C>> {
    if f.vars().len() != 1 || f.weights()[0] != 1 {
        return Err(Error::input(
            "chern_root_product expects a univariate series of weight 1",
        ));
    }
    if f.cap() < cap {
        return Err(Error::input(format!(
            "series known to order {} but order {cap} is needed",
            f.cap()
        )));
    }
    let f0 = f.constant_term();
    let mut g = f.truncate(cap);
    g.set(vec![0], C::zero_elem());

    let p: Vec<TruncSeries<C>> = power_sums(rank, cap).iter().map(lift).collect();
    let base = p[0].zero_like();

    let mut big_p = vec![base.clone()];
    let mut g_pow = g.clone();
    for m in 1..=cap {
        let mut acc = base.clone();
        for j in m..=cap {
            let coeff = g_pow.coeff(&[j]);
            if !coeff.is_zero_elem() {
                acc = acc.add(&p[j as usize].mul_coeff(&coeff));
            }
        }
        big_p.push(acc);
        g_pow = g_pow.mul(&g);
    }

    let top = rank.min(cap as usize);
    let mut e = vec![base.one_like()];
    for k in 1..=top {
        let mut acc = base.clone();
        for i in 1..=k {
            let term = e[k - i].mul(&big_p[i]);
            acc = if (i - 1) % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        e.push(acc.scale(&Rat::new(1.into(), (k as i64).into())));
    }

    let mut out = base.clone();
    for (k, ek) in e.iter().enumerate() {
        let mut w = C::one_elem();
        for _ in 0..rank - k {
            w = w.mul_elem(&f0);
        }
        out = out.add(&ek.mul_coeff(&w));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{factorial, rat};

    fn uni(c: &[Rat], cap: u32) -> TruncSeries<Rat> {
        TruncSeries::univariate("y", cap, c.iter().cloned())
    }

    #[test]
    fn total_chern_class() {
        let r = chern_root_product(&uni(&[int(1), int(1)], 3), 3, 3).unwrap();
        let expected = {
            let b = chern_variables(3, 3);
            b.one_like()
                .add(&b.variable(0))
                .add(&b.variable(1))
                .add(&b.variable(2))
        };
        assert_eq!(r, expected);
    }

    #[test]
    fn second_power_sum() {
        let r = chern_root_product(&uni(&[int(1), int(0), int(1)], 4), 2, 4).unwrap();
        let b = chern_variables(2, 4);
        let c1 = b.variable(0);
        let c2 = b.variable(1);
        let p2 = c1.mul(&c1).sub(&c2.scale(&int(2)));
        assert_eq!(r.coeff(&[2, 0]), p2.coeff(&[2, 0]));
        assert_eq!(r.coeff(&[0, 1]), p2.coeff(&[0, 1]));
    }

    #[test]
    fn exponential_is_multiplicative() {
        let exp: Vec<Rat> = (0..=3).map(|k| factorial(k).recip()).collect();
        let r = chern_root_product(&uni(&exp[..2], 1), 1, 1).unwrap();
        let b = chern_variables(1, 1);
        assert_eq!(r, b.one_like().add(&b.variable(0)));
        // rank 2: e^{y1+y2} = e^{c1}, so the c2 coefficient vanishes
        let r = chern_root_product(&uni(&exp, 3), 2, 3).unwrap();
        assert_eq!(r.coeff(&[2, 0]), rat(1, 2));
        assert_eq!(r.coeff(&[0, 1]), int(0));
        assert_eq!(r.coeff(&[1, 1]), int(0));
    }

    #[test]
    fn insufficient_order() {
        assert!(chern_root_product(&uni(&[int(1)], 1), 2, 2).is_err());
    }
}
