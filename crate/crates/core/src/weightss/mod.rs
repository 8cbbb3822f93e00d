//! Spectral sequences over exact fields.
//!
//! Two inputs are supported. [`SncData`] carries the first page of the
//! weight spectral sequence of a smooth variety `U = X − D`, namely
//! `E₁^{i,j} = H^j(X^{(i)})` with `d₁` the alternating restriction maps,
//! converging to `H^{i+j}_c(U)`. [`FilteredComplex`] carries a cochain
//! complex with a decreasing filtration, from which every page and every
//! differential is computed.
//!
//! Bidegrees are `(i, j)` with `d_r` of bidegree `(r, 1 − r)`. In
//! filtered-complex mode `i` is the filtration degree and `i + j` the total
//! degree.

mod filtered;
pub mod linalg;
mod snc;
mod toric;

pub use filtered::FilteredComplex;
pub use linalg::{Field, Matrix};
pub use snc::{build_e1, compute_e2, BettiPiece, SncData};
pub use toric::toric_builder;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{FracPoly, Rat};

pub type Bidegree = (i64, i64);

#[derive(Debug, Clone, PartialEq)]
pub struct Page {
    pub r: u32,
    /// Nonzero dimensions only.
    pub dims: BTreeMap<Bidegree, usize>,
    /// `d_r` keyed by source bidegree, in the page's chosen bases. `None`
    /// when the input carries no chain-level data for this page.
    pub differentials: Option<BTreeMap<Bidegree, Matrix>>,
}

impl Page {
    pub fn dim(&self, b: Bidegree) -> usize {
        self.dims.get(&b).copied().unwrap_or(0)
    }

    pub fn target(&self, (i, j): Bidegree) -> Bidegree {
        let r = self.r as i64;
        (i + r, j + 1 - r)
    }

    /// Whether every differential on this page is known to vanish.
    pub fn differential_vanishes(&self) -> Option<bool> {
        self.differentials
            .as_ref()
            .map(|ds| ds.values().all(Matrix::is_zero))
    }

    /// Total rank of `d_r`.
    pub fn differential_rank(&self, field: Field) -> Option<usize> {
        self.differentials
            .as_ref()
            .map(|ds| ds.values().map(|m| m.rank(field)).sum())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSequence {
    pub field: Field,
    pub pages: Vec<Page>,
    /// Whether the last page is `E_∞`.
    pub complete: bool,
}

impl SpectralSequence {
    pub fn page(&self, r: u32) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    pub fn last(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// Checks `d_r ∘ d_r = 0` on every page with known differentials.
    pub fn check_square_zero(&self) -> Result<()> {
        for page in &self.pages {
            let Some(ds) = &page.differentials else {
                continue;
            };
            for (&src, d) in ds {
                let mid = page.target(src);
                if let Some(d2) = ds.get(&mid) {
                    if !d2.compose(self.field, d)?.is_zero() {
                        return Err(Error::precondition(
                            "square_zero",
                            format!("d_{} ∘ d_{} != 0 at {:?}", page.r, page.r, src),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// `E_∞^{i,j}` with `i + j = n`, as `(i, j, dim)` for nonzero pieces:
    /// the graded pieces of the filtration on the abutment in degree `n`.
    pub fn weight_graded(&self, n: i64) -> Result<Vec<(i64, i64, usize)>> {
        if !self.complete {
            return Err(Error::precondition(
                "pages_stabilized",
                "the spectral sequence has not been shown to degenerate".to_string(),
            ));
        }
        Ok(self
            .last()
            .dims
            .iter()
            .filter(|((i, j), _)| i + j == n)
            .map(|(&(i, j), &d)| (i, j, d))
            .collect())
    }

    /// Total dimensions `Σ_{i+j=n} dim E_∞^{i,j}` by degree.
    pub fn abutment_dims(&self) -> Result<BTreeMap<i64, usize>> {
        if !self.complete {
            return Err(Error::precondition(
                "pages_stabilized",
                "the spectral sequence has not been shown to degenerate".to_string(),
            ));
        }
        let mut out = BTreeMap::new();
        for (&(i, j), &d) in &self.last().dims {
            *out.entry(i + j).or_insert(0) += d;
        }
        Ok(out)
    }
}

/// `Σ (−1)^{i+j} dim E₂^{i,j} q^{j/2}` over ℚ.
pub fn vpp_from_ss(ss: &SpectralSequence) -> Result<FracPoly> {
    if ss.field != Field::Rational {
        return Err(Error::input("vpp_from_ss needs rational coefficients"));
    }
    let e2 = ss
        .page(2)
        .ok_or_else(|| Error::precondition("e2_computed", "no E2 page".to_string()))?;
    let mut p = FracPoly::zero();
    for (&(i, j), &d) in &e2.dims {
        let sign = if (i + j).rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(
            Rat::new(j.into(), 2.into()),
            Rat::from_integer((sign * d as i64).into()),
        );
    }
    Ok(p)
}

/// Whether every `d_r` with `r ≥ from` vanishes because no nonzero spot of
/// `page` has a nonzero target spot.
pub(crate) fn higher_differentials_vanish(page: &Page, from: u32) -> bool {
    let span = page
        .dims
        .keys()
        .map(|b| b.0)
        .fold((i64::MAX, i64::MIN), |(lo, hi), i| (lo.min(i), hi.max(i)));
    if span.0 > span.1 {
        return true;
    }
    let max_r = (span.1 - span.0).max(0) as u32;
    for r in from..=max_r.max(from) {
        let rr = r as i64;
        for &(i, j) in page.dims.keys() {
            if page.dim((i + rr, j + 1 - rr)) > 0 {
                return false;
            }
        }
    }
    true
}

pub(crate) fn zero_differentials(page: &Page, r: u32) -> BTreeMap<Bidegree, Matrix> {
    let rr = r as i64;
    page.dims
        .iter()
        .map(|(&(i, j), &d)| ((i, j), Matrix::zeros(page.dim((i + rr, j + 1 - rr)), d)))
        .collect()
}
