//! First and second pages from simple normal crossing data.

use std::collections::BTreeMap;

use super::linalg::{Field, Matrix};
use super::{higher_differentials_vanish, zero_differentials, Page, SpectralSequence};
use crate::error::{Error, Result};

/// A connected piece of some `X^{(i)}` with its Betti numbers over the field.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiPiece {
    pub name: String,
    pub betti: Vec<usize>,
}

/// Compactification `U = X − D` with `D` simple normal crossing.
///
/// `strata[i]` lists the pieces of `X^{(i)}`, the disjoint union of
/// `i`-fold intersections of components of `D` (`X^{(0)} = X`).
/// `d1[(i, j)]` is the matrix of `H^j(X^{(i)}) → H^j(X^{(i+1)})` in the
/// concatenated bases of the pieces; absent entries are zero maps.
#[derive(Debug, Clone, PartialEq)]
pub struct SncData {
    pub field: Field,
    pub components: usize,
    pub strata: Vec<Vec<BettiPiece>>,
    pub d1: BTreeMap<(usize, usize), Matrix>,
}

impl SncData {
    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.strata
            .get(i)
            .map(|ps| {
                ps.iter()
                    .map(|p| p.betti.get(j).copied().unwrap_or(0))
                    .sum()
            })
            .unwrap_or(0)
    }

    fn top_degree(&self) -> usize {
        self.strata
            .iter()
            .flatten()
            .map(|p| p.betti.len())
            .max()
            .unwrap_or(0)
    }

    fn d1_or_zero(&self, i: usize, j: usize) -> Matrix {
        self.d1
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(i + 1, j), self.dim(i, j)))
    }
}

/// `E₁^{i,j} = H^j(X^{(i)})` with `d₁` from the input matrices, after
/// checking shapes and `d₁ ∘ d₁ = 0`.
pub fn build_e1(s: &SncData) -> Result<SpectralSequence> {
    if s.strata.len() > s.components + 1 {
        return Err(Error::input(format!(
            "{} strata levels given for {} divisor components",
            s.strata.len(),
            s.components
        )));
    }
    let mut differentials = BTreeMap::new();
    for (&(i, j), m) in &s.d1 {
        let (rows, cols) = (s.dim(i + 1, j), s.dim(i, j));
        if m.rows() != rows || m.cols() != cols {
            return Err(Error::input(format!(
                "d1 at ({i},{j}) has shape {}x{}, expected {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let mut dims = BTreeMap::new();
    for i in 0..s.strata.len() {
        for j in 0..s.top_degree() {
            let d = s.dim(i, j);
            if d == 0 {
                continue;
            }
            dims.insert((i as i64, j as i64), d);
            let m = s.d1_or_zero(i, j).reduce(s.field)?;
            differentials.insert((i as i64, j as i64), m);
        }
    }
    let ss = SpectralSequence {
        field: s.field,
        pages: vec![Page {
            r: 1,
            dims,
            differentials: Some(differentials),
        }],
        complete: false,
    };
    ss.check_square_zero()?;
    Ok(ss)
}

/// Appends `E₂ = H(E₁, d₁)`.
///
/// SNC data carries no chain-level information past `E₁`, so `d₂` and the
/// later differentials are only known when the support of `E₂` forces them
/// to vanish. Over ℚ the sequence degenerates at `E₂` for geometric input,
/// and the result is marked complete; over `F_p` only when forced.
pub fn compute_e2(ss: &SpectralSequence) -> Result<SpectralSequence> {
    let e1 = ss
        .page(1)
        .ok_or_else(|| Error::precondition("e1_built", "no E1 page".to_string()))?;
    let d1 = e1
        .differentials
        .as_ref()
        .ok_or_else(|| Error::precondition("e1_built", "E1 has no differential".to_string()))?;
    let rank_at = |b: (i64, i64)| d1.get(&b).map_or(0, |m| m.rank(ss.field));
    let mut dims = BTreeMap::new();
    for (&(i, j), &d) in &e1.dims {
        let out = rank_at((i, j));
        let inc = rank_at((i - 1, j));
        let h = d - out - inc;
        if h > 0 {
            dims.insert((i, j), h);
        }
    }
    let mut e2 = Page {
        r: 2,
        dims,
        differentials: None,
    };
    let forced = higher_differentials_vanish(&e2, 2);
    if forced {
        e2.differentials = Some(zero_differentials(&e2, 2));
    }
    Ok(SpectralSequence {
        field: ss.field,
        pages: vec![e1.clone(), e2],
        complete: forced || ss.field == Field::Rational,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;
    use crate::weightss::vpp_from_ss;

    fn piece(name: &str, betti: &[usize]) -> BettiPiece {
        BettiPiece {
            name: name.into(),
            betti: betti.to_vec(),
        }
    }

    fn multiplicative_group() -> SncData {
        SncData {
            field: Field::Rational,
            components: 2,
            strata: vec![
                vec![piece("P1", &[1, 0, 1])],
                vec![piece("0", &[1]), piece("inf", &[1])],
            ],
            d1: BTreeMap::from([(
                (0, 0),
                Matrix::from_rows(2, 1, vec![int(1), int(1)]).unwrap(),
            )]),
        }
    }

    #[test]
    fn punctured_line() {
        let ss = build_e1(&multiplicative_group()).unwrap();
        let e1 = ss.page(1).unwrap();
        assert_eq!(e1.dim((0, 0)), 1);
        assert_eq!(e1.dim((1, 0)), 2);
        assert_eq!(e1.dim((0, 2)), 1);
        let ss = compute_e2(&ss).unwrap();
        let e2 = ss.page(2).unwrap();
        assert_eq!(e2.dim((0, 0)), 0);
        assert_eq!(e2.dim((1, 0)), 1);
        assert_eq!(e2.dim((0, 2)), 1);
        assert_eq!(ss.weight_graded(1).unwrap(), vec![(1, 0, 1)]);
        assert_eq!(ss.weight_graded(2).unwrap(), vec![(0, 2, 1)]);
        assert_eq!(vpp_from_ss(&ss).unwrap().to_string(), "q - 1");
    }

    #[test]
    fn no_divisor_is_pure() {
        let s = SncData {
            field: Field::Rational,
            components: 0,
            strata: vec![vec![piece("P2", &[1, 0, 1, 0, 1])]],
            d1: BTreeMap::new(),
        };
        let ss = compute_e2(&build_e1(&s).unwrap()).unwrap();
        assert_eq!(ss.page(1).unwrap().dims, ss.page(2).unwrap().dims);
        for n in [0, 2, 4] {
            assert_eq!(ss.weight_graded(n).unwrap().len(), 1);
        }
        assert_eq!(vpp_from_ss(&ss).unwrap().to_string(), "q^2 + q + 1");
    }

    #[test]
    fn bad_shapes_and_non_complexes() {
        let mut s = multiplicative_group();
        s.d1.insert((0, 0), Matrix::from_rows(1, 1, vec![int(1)]).unwrap());
        assert!(build_e1(&s).is_err());

        let s = SncData {
            field: Field::Rational,
            components: 2,
            strata: vec![
                vec![piece("a", &[1])],
                vec![piece("b", &[1])],
                vec![piece("c", &[1])],
            ],
            d1: BTreeMap::from([
                ((0, 0), Matrix::from_rows(1, 1, vec![int(1)]).unwrap()),
                ((1, 0), Matrix::from_rows(1, 1, vec![int(1)]).unwrap()),
            ]),
        };
        let err = build_e1(&s).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                invariant: "square_zero",
                ..
            }
        ));
    }
}
