//! SNC data for `𝔾_mⁿ ⊂ (ℙ¹)ⁿ` with the `2n` coordinate divisors.
//!
//! Divisor `2k + ε` is `{x_k = 0}` (`ε = 0`) or `{x_k = ∞}` (`ε = 1`). An
//! intersection of a set `S` of divisors is nonempty iff the coordinates
//! `T(S)` are distinct, and is then `(ℙ¹)^{n−|S|}` in the remaining
//! coordinates. Its cohomology has basis `h_A` for `A` disjoint from
//! `T(S)`, with `h_A` in degree `2|A|`. Restriction to `S ∪ {s}` kills `h_A`
//! when the new coordinate lies in `A` and otherwise keeps it, with sign
//! `(−1)^{#{t ∈ S : t < s}}`.

use std::collections::BTreeMap;

use super::linalg::{Field, Matrix};
use super::snc::{BettiPiece, SncData};
use crate::error::{Error, Result};
use crate::exactalg::int;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Strata of level `i`: sets of `i` divisors on distinct coordinates.
fn strata(n: usize, i: usize) -> Vec<Vec<usize>> {
    subsets(2 * n, i)
        .into_iter()
        .filter(|s| s.windows(2).all(|w| w[0] / 2 != w[1] / 2))
        .collect()
}

/// Basis of `H^{2a}` of the stratum `s`: subsets of its free coordinates.
fn classes(n: usize, s: &[usize], a: usize) -> Vec<Vec<usize>> {
    let free: Vec<usize> = (0..n).filter(|k| !s.iter().any(|d| d / 2 == *k)).collect();
    subsets(free.len(), a)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| free[i]).collect())
        .collect()
}

pub fn toric_builder(n: usize) -> Result<SncData> {
    if !(1..=6).contains(&n) {
        return Err(Error::input(format!(
            "toric builder needs 1 <= n <= 6, got {n}"
        )));
    }
    let mut levels = Vec::new();
    for i in 0..=n {
        levels.push(
            strata(n, i)
                .into_iter()
                .map(|s| {
                    let dim = n - i;
                    let mut betti = vec![0; 2 * dim + 1];
                    for a in 0..=dim {
                        betti[2 * a] = classes(n, &s, a).len();
                    }
                    let name = if s.is_empty() {
                        format!("(P1)^{n}")
                    } else {
                        let parts: Vec<String> = s
                            .iter()
                            .map(|d| format!("x{}={}", d / 2, if d % 2 == 0 { "0" } else { "inf" }))
                            .collect();
                        parts.join(",")
                    };
                    BettiPiece { name, betti }
                })
                .collect::<Vec<_>>(),
        );
    }

    let mut d1 = BTreeMap::new();
    for i in 0..n {
        let src = strata(n, i);
        let dst = strata(n, i + 1);
        let dst_pos: BTreeMap<&[usize], usize> = dst
            .iter()
            .enumerate()
            .map(|(k, s)| (s.as_slice(), k))
            .collect();
        for a in 0..=(n - i) {
            let src_basis: Vec<(usize, Vec<usize>)> = src
                .iter()
                .enumerate()
                .flat_map(|(k, s)| classes(n, s, a).into_iter().map(move |c| (k, c)))
                .collect();
            let dst_basis: Vec<(usize, Vec<usize>)> = dst
                .iter()
                .enumerate()
                .flat_map(|(k, s)| classes(n, s, a).into_iter().map(move |c| (k, c)))
                .collect();
            if src_basis.is_empty() || dst_basis.is_empty() {
                continue;
            }
            let row_of: BTreeMap<(usize, &[usize]), usize> = dst_basis
                .iter()
                .enumerate()
                .map(|(r, (k, c))| ((*k, c.as_slice()), r))
                .collect();
            let mut m = Matrix::zeros(dst_basis.len(), src_basis.len());
            for (col, (k, cls)) in src_basis.iter().enumerate() {
                let s = &src[*k];
                for new in 0..2 * n {
                    let coord = new / 2;
                    if s.iter().any(|d| d / 2 == coord) || cls.contains(&coord) {
                        continue;
                    }
                    let mut t = s.clone();
                    t.push(new);
                    t.sort_unstable();
                    let before = s.iter().filter(|&&d| d < new).count();
                    let sign = if before % 2 == 0 { 1 } else { -1 };
                    let target = dst_pos[t.as_slice()];
                    let row = row_of[&(target, cls.as_slice())];
                    m.set(row, col, int(sign));
                }
            }
            d1.insert((i, 2 * a), m);
        }
    }
    Ok(SncData {
        field: Field::Rational,
        components: 2 * n,
        strata: levels,
        d1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weightss::{build_e1, compute_e2, vpp_from_ss};

    fn compact_support_dims(n: usize) -> Vec<usize> {
        let ss = compute_e2(&build_e1(&toric_builder(n).unwrap()).unwrap()).unwrap();
        let totals = ss.abutment_dims().unwrap();
        (0..=2 * n as i64)
            .map(|k| totals.get(&k).copied().unwrap_or(0))
            .collect()
    }

    #[test]
    fn one_dimensional_case_matches_the_line() {
        let s = toric_builder(1).unwrap();
        assert_eq!(s.dim(0, 0), 1);
        assert_eq!(s.dim(0, 2), 1);
        assert_eq!(s.dim(1, 0), 2);
    }

    #[test]
    fn square_has_four_divisors() {
        let s = toric_builder(2).unwrap();
        assert_eq!(
            (0..3).map(|i| s.dim(i, 0)).collect::<Vec<_>>(),
            vec![1, 4, 4]
        );
        assert_eq!(compact_support_dims(2), vec![0, 0, 1, 2, 1]);
    }

    #[test]
    fn cube() {
        assert_eq!(compact_support_dims(3), vec![0, 0, 0, 1, 3, 3, 1]);
        let ss = compute_e2(&build_e1(&toric_builder(3).unwrap()).unwrap()).unwrap();
        assert_eq!(
            vpp_from_ss(&ss).unwrap().to_string(),
            "q^3 - 3*q^2 + 3*q - 1"
        );
        assert_eq!(ss.page(2).unwrap().differential_vanishes(), Some(true));
    }

    #[test]
    fn out_of_range() {
        assert!(toric_builder(0).is_err());
        assert!(toric_builder(7).is_err());
    }
}
