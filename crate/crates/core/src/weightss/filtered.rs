//! Spectral sequence of a filtered cochain complex, all pages.
//!
//! With `F^p` the filtration and `Z_r^p = {x ∈ F^p : dx ∈ F^{p+r}}`,
//! the pages are `E_r^p = Z_r^p / (Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1})` and
//! `d_r` is induced by `d`. Each `E_r^p` is represented by explicit cycle
//! representatives, chosen by extending a basis of the denominator with
//! kernel vectors in a fixed order.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::linalg::{Field, Matrix, Span, Vector};
use super::{Bidegree, Page, SpectralSequence};
use crate::error::{Error, Result};

/// Finite cochain complex with a basis adapted to a decreasing filtration.
///
/// Basis element `b` of `C^n` has filtration level `levels[n][b]`; `F^p C^n`
/// is spanned by the elements of level at least `p`. `differentials[k]` is
/// the matrix of `C^{n₀+k} → C^{n₀+k+1}` with `n₀ = lowest_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    field: Field,
    lowest_degree: i64,
    levels: Vec<Vec<i64>>,
    differentials: Vec<Matrix>,
}

impl FilteredComplex {
    /// Validates shapes, filtration preservation and `d² = 0` after
    /// reducing the entries into `field`.
    pub fn new(
        field: Field,
        lowest_degree: i64,
        levels: Vec<Vec<i64>>,
        differentials: Vec<Matrix>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::input("filtered complex needs at least one degree"));
        }
        if differentials.len() + 1 != levels.len() {
            return Err(Error::input(format!(
                "{} degrees need {} differentials, got {}",
                levels.len(),
                levels.len() - 1,
                differentials.len()
            )));
        }
        let mut reduced = Vec::with_capacity(differentials.len());
        for (k, d) in differentials.iter().enumerate() {
            let (src, dst) = (&levels[k], &levels[k + 1]);
            if d.rows() != dst.len() || d.cols() != src.len() {
                return Err(Error::input(format!(
                    "differential out of degree {} has shape {}x{}, expected {}x{}",
                    lowest_degree + k as i64,
                    d.rows(),
                    d.cols(),
                    dst.len(),
                    src.len()
                )));
            }
            let d = d.reduce(field)?;
            for (a, la) in dst.iter().enumerate() {
                for (b, lb) in src.iter().enumerate() {
                    if la < lb && !d.get(a, b).is_zero() {
                        return Err(Error::precondition(
                            "filtration_preserving",
                            format!(
                                "degree {}: basis element {b} (level {lb}) maps to element {a} (level {la})",
                                lowest_degree + k as i64
                            ),
                        ));
                    }
                }
            }
            reduced.push(d);
        }
        for k in 1..reduced.len() {
            if !reduced[k].compose(field, &reduced[k - 1])?.is_zero() {
                return Err(Error::precondition(
                    "square_zero",
                    format!("d∘d != 0 out of degree {}", lowest_degree + k as i64 - 1),
                ));
            }
        }
        Ok(Self {
            field,
            lowest_degree,
            levels,
            differentials: reduced,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn degrees(&self) -> std::ops::Range<i64> {
        self.lowest_degree..self.lowest_degree + self.levels.len() as i64
    }

    fn size(&self, n: i64) -> usize {
        self.index(n).map_or(0, |k| self.levels[k].len())
    }

    fn index(&self, n: i64) -> Option<usize> {
        let k = n - self.lowest_degree;
        (k >= 0 && (k as usize) < self.levels.len()).then_some(k as usize)
    }

    fn level(&self, n: i64, b: usize) -> i64 {
        self.levels[self.index(n).expect("degree in range")][b]
    }

    /// Differential out of degree `n`; zero matrices at the ends.
    fn d(&self, n: i64) -> Matrix {
        match self.index(n) {
            Some(k) if k < self.differentials.len() => self.differentials[k].clone(),
            _ => Matrix::zeros(self.size(n + 1), self.size(n)),
        }
    }

    fn level_range(&self) -> (i64, i64) {
        let all = self.levels.iter().flatten();
        let lo = all.clone().copied().min().unwrap_or(0);
        let hi = all.copied().max().unwrap_or(0);
        (lo, hi)
    }

    /// Cohomology dimensions of the total complex by direct rank count.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees()
            .map(|n| {
                let out = self.d(n).rank(self.field);
                let inc = self.d(n - 1).rank(self.field);
                (n, self.size(n) - out - inc)
            })
            .collect()
    }

    /// Basis of `Z_r^p` in degree `n`.
    fn z(&self, r: i64, p: i64, n: i64) -> Vec<Vector> {
        let size = self.size(n);
        let cols: Vec<usize> = (0..size).filter(|&b| self.level(n, b) >= p).collect();
        if cols.is_empty() {
            return Vec::new();
        }
        let d = self.d(n);
        let rows: Vec<usize> = (0..self.size(n + 1))
            .filter(|&a| self.level(n + 1, a) < p + r)
            .collect();
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &a) in rows.iter().enumerate() {
            for (j, &b) in cols.iter().enumerate() {
                m.set(i, j, d.get(a, b).clone());
            }
        }
        m.kernel(self.field)
            .into_iter()
            .map(|k| {
                let mut v = vec![num_traits::zero(); size];
                for (j, &b) in cols.iter().enumerate() {
                    v[b] = k[j].clone();
                }
                v
            })
            .collect()
    }

    /// Generators of `B_r^p = Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1}` in degree `n`.
    fn b(&self, r: i64, p: i64, n: i64) -> Vec<Vector> {
        let mut out = self.z(r - 1, p + 1, n);
        let d = self.d(n - 1);
        for x in self.z(r - 1, p - r + 1, n - 1) {
            out.push(d.apply(self.field, &x));
        }
        out
    }

    /// Every page `E_1, …, E_{s+1}` where `s` is the filtration length;
    /// the last one is `E_∞`.
    pub fn pages(&self) -> Result<SpectralSequence> {
        let (lo, hi) = self.level_range();
        let last = (hi - lo + 1).max(1);
        let mut pages = Vec::new();
        for r in 1..=last {
            pages.push(self.page(r, lo, hi)?);
        }
        let ss = SpectralSequence {
            field: self.field,
            pages,
            complete: true,
        };
        ss.check_square_zero()?;
        let totals = ss.abutment_dims()?;
        for (n, h) in self.cohomology_dims() {
            if totals.get(&n).copied().unwrap_or(0) != h {
                return Err(Error::internal(
                    "abutment",
                    format!("E_inf totals in degree {n} differ from H^{n} = {h}"),
                ));
            }
        }
        Ok(ss)
    }

    fn page(&self, r: i64, lo: i64, hi: i64) -> Result<Page> {
        struct Spot {
            reps: Vec<Vector>,
            denominator: Vec<Vector>,
        }
        let mut spots: BTreeMap<(i64, i64), Spot> = BTreeMap::new();
        for n in self.degrees() {
            let size = self.size(n);
            for p in lo..=hi {
                let denominator = self.b(r, p, n);
                let mut span = Span::from_vectors(self.field, size, denominator.iter().cloned());
                let reps: Vec<Vector> = self
                    .z(r, p, n)
                    .into_iter()
                    .filter(|v| span.insert(v.clone()))
                    .collect();
                spots.insert((p, n), Spot { reps, denominator });
            }
        }
        let mut dims = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for (&(p, n), spot) in &spots {
            if spot.reps.is_empty() {
                continue;
            }
            let src: Bidegree = (p, n - p);
            dims.insert(src, spot.reps.len());
            let d = self.d(n);
            let target = spots.get(&(p + r, n + 1));
            let rows = target.map_or(0, |t| t.reps.len());
            let mut m = Matrix::zeros(rows, spot.reps.len());
            if let Some(t) = target {
                let size = self.size(n + 1);
                let mut span = Span::new(self.field, size);
                for g in &t.denominator {
                    span.insert(g.clone());
                }
                let offset = t.denominator.len();
                for g in &t.reps {
                    span.insert(g.clone());
                }
                for (c, x) in spot.reps.iter().enumerate() {
                    let dx = d.apply(self.field, x);
                    let coords = span.coordinates(&dx).ok_or_else(|| {
                        Error::internal(
                            "cycle_image",
                            format!("d of a representative at {src:?} leaves Z_{r}"),
                        )
                    })?;
                    for row in 0..rows {
                        m.set(row, c, coords[offset + row].clone());
                    }
                }
            }
            differentials.insert(src, m);
        }
        Ok(Page {
            r: r as u32,
            dims,
            differentials: Some(differentials),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    /// `x ↦ 2u + y` with `x, u, y` at levels 0, 1, 2.
    fn two_step(field: Field) -> FilteredComplex {
        FilteredComplex::new(
            field,
            0,
            vec![vec![0], vec![1, 2]],
            vec![Matrix::from_rows(2, 1, vec![int(2), int(1)]).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn mod_two_has_a_second_differential() {
        let ss = two_step(Field::Prime(2)).pages().unwrap();
        let e1 = ss.page(1).unwrap();
        let e2 = ss.page(2).unwrap();
        let e3 = ss.page(3).unwrap();
        assert_eq!(e1.differential_vanishes(), Some(true));
        assert_eq!(e2.differential_vanishes(), Some(false));
        assert_ne!(e2.dims, e3.dims);
        assert_eq!(e3.dims, BTreeMap::from([((1, 0), 1)]));
    }

    #[test]
    fn rational_lift_degenerates_at_e2() {
        let ss = two_step(Field::Rational).pages().unwrap();
        assert_eq!(
            ss.page(1).unwrap().differential_rank(Field::Rational),
            Some(1)
        );
        assert_eq!(ss.page(2).unwrap().differential_vanishes(), Some(true));
        assert_eq!(ss.last().dims, BTreeMap::from([((2, -1), 1)]));
        assert_eq!(ss.abutment_dims().unwrap()[&1], 1);
    }

    #[test]
    fn trivial_filtration_is_already_infinite() {
        let c = FilteredComplex::new(
            Field::Rational,
            0,
            vec![vec![0, 0], vec![0]],
            vec![Matrix::from_rows(1, 2, vec![int(1), int(-1)]).unwrap()],
        )
        .unwrap();
        let ss = c.pages().unwrap();
        assert_eq!(ss.pages.len(), 1);
        assert_eq!(ss.page(1).unwrap().dims, BTreeMap::from([((0, 0), 1)]));
    }

    #[test]
    fn rejects_filtration_breaking_differential() {
        let err = FilteredComplex::new(
            Field::Rational,
            0,
            vec![vec![1], vec![0]],
            vec![Matrix::from_rows(1, 1, vec![int(1)]).unwrap()],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                invariant: "filtration_preserving",
                ..
            }
        ));
    }
}
