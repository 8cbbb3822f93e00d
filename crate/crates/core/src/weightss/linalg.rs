//! Exact linear algebra over ℚ and F_p with deterministic pivoting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::Rat;

/// Coefficient field. Elements of F_p are stored as rationals with integer
/// value in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Q" => Ok(Field::Rational),
            "F2" => Ok(Field::Prime(2)),
            _ => {
                let p: u64 = s
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| Error::input(format!("unknown field `{s}`")))?;
                if p < 2
                    || (2..p)
                        .take_while(|d| d * d <= p)
                        .any(|d| p.is_multiple_of(d))
                {
                    return Err(Error::input(format!("{p} is not prime")));
                }
                Ok(Field::Prime(p))
            }
        }
    }

    /// Image of a rational number in the field.
    pub fn reduce(&self, x: &Rat) -> Result<Rat> {
        match self {
            Field::Rational => Ok(x.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let d = x.denom().mod_floor(&p);
                if d.is_zero() {
                    return Err(Error::input(format!("{x} has no image mod {p}")));
                }
                let n = x.numer().mod_floor(&p);
                let dinv = d.modpow(&(&p - 2u32), &p);
                Ok(Rat::from_integer((n * dinv).mod_floor(&p)))
            }
        }
    }

    fn norm(&self, x: Rat) -> Rat {
        match self {
            Field::Rational => x,
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                Rat::from_integer(x.to_integer().mod_floor(&p))
            }
        }
    }

    pub fn add(&self, a: &Rat, b: &Rat) -> Rat {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        self.norm(a * b)
    }

    pub fn inv(&self, a: &Rat) -> Rat {
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                Rat::from_integer(a.to_integer().modpow(&(&p - 2u32), &p))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Prime(2) => f.write_str("F2"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub type Vector = Vec<Rat>;

/// Dense matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::input(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data: entries,
        })
    }

    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Rat) {
        self.data[r * self.cols + c] = x;
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Entrywise image in the field.
    pub fn reduce(&self, field: Field) -> Result<Self> {
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| field.reduce(x))
                .collect::<Result<_>>()?,
        })
    }

    pub fn apply(&self, field: Field, v: &[Rat]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc = field.add(&acc, &field.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, field: Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::internal(
                "composable_shapes",
                format!(
                    "cannot compose {}x{} after {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        let cols: Vec<Vector> = (0..other.cols)
            .map(|c| self.apply(field, &other.column(c)))
            .collect();
        Ok(Matrix::from_columns(self.rows, &cols))
    }

    pub fn rank(&self, field: Field) -> usize {
        let mut span = Span::new(field, self.rows);
        (0..self.cols)
            .filter(|&c| span.insert(self.column(c)))
            .count()
    }

    /// Basis of the null space, one vector per free column of the reduced
    /// row echelon form.
    pub fn kernel(&self, field: Field) -> Vec<Vector> {
        let (rref, pivots) = self.rref(field);
        let mut out = Vec::new();
        let mut pivot_row = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(r);
        }
        for free in 0..self.cols {
            if pivot_row[free].is_some() {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                let a = rref.get(r, free);
                if !a.is_zero() {
                    v[c] = field.sub(&Rat::zero(), a);
                }
            }
            out.push(v);
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, field: Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = field.inv(m.get(row, col));
            for c in col..m.cols {
                let x = field.mul(m.get(row, c), &inv);
                m.set(row, c, x);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let a = m.get(row, c);
                    if a.is_zero() {
                        continue;
                    }
                    let x = field.sub(m.get(r, c), &field.mul(&f, a));
                    m.set(r, c, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally built subspace in echelon form. Each stored row also
/// records its expression in the inserted generators, so membership tests
/// can return coordinates.
#[derive(Debug, Clone)]
pub struct Span {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vector, Vector)>,
    generators: usize,
}

impl Span {
    pub fn new(field: Field, dim: usize) -> Self {
        Self {
            field,
            dim,
            rows: Vec::new(),
            generators: 0,
        }
    }

    pub fn from_vectors(field: Field, dim: usize, vs: impl IntoIterator<Item = Vector>) -> Self {
        let mut s = Self::new(field, dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// coefficients (over generators) of what was subtracted.
    fn reduce(&self, mut v: Vector) -> (Vector, Vector) {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let f = self.field;
        let mut coords = vec![Rat::zero(); self.generators];
        for (pivot, row, expr) in &self.rows {
            let a = v[*pivot].clone();
            if a.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = f.sub(x, &f.mul(&a, y));
                }
            }
            for (c, e) in coords.iter_mut().zip(expr) {
                if !e.is_zero() {
                    *c = f.add(c, &f.mul(&a, e));
                }
            }
        }
        (v, coords)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v.to_vec()).0.iter().all(Zero::is_zero)
    }

    /// Adds a generator; returns whether it enlarged the span.
    pub fn insert(&mut self, v: Vector) -> bool {
        let f = self.field;
        let (rem, coords) = self.reduce(v);
        self.generators += 1;
        for (_, _, expr) in &mut self.rows {
            expr.push(Rat::zero());
        }
        let Some(pivot) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(&rem[pivot]);
        let row: Vector = rem.iter().map(|x| f.mul(x, &inv)).collect();
        // row = (v − Σ coords·gens)/lead
        let mut expr: Vector = coords
            .iter()
            .map(|c| f.sub(&Rat::zero(), &f.mul(c, &inv)))
            .collect();
        expr.push(inv);
        self.rows.push((pivot, row, expr));
        true
    }

    /// Coordinates of `v` in terms of the inserted generators, if `v` lies
    /// in the span. Generators that did not enlarge the span get 0.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vector> {
        let (rem, coords) = self.reduce(v.to_vec());
        rem.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Reduced basis vectors.
    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r, _)| r.clone()).collect()
    }
}

/// Unit vector of length `n`.
pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn m(rows: usize, cols: usize, e: &[i64]) -> Matrix {
        Matrix::from_rows(rows, cols, e.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn rank_depends_on_field() {
        let a = m(2, 2, &[2, 0, 0, 1]);
        assert_eq!(a.rank(Field::Rational), 2);
        assert_eq!(a.reduce(Field::Prime(2)).unwrap().rank(Field::Prime(2)), 1);
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let a = m(2, 4, &[1, 2, 0, 1, 0, 0, 1, 3]);
        let k = a.kernel(Field::Rational);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.apply(Field::Rational, v).iter().all(Zero::is_zero));
        }
        let f3 = Field::Prime(3);
        let a3 = m(2, 2, &[1, 1, 1, 1]).reduce(f3).unwrap();
        let k3 = a3.kernel(f3);
        assert_eq!(k3, vec![vec![int(2), int(1)]]);
    }

    #[test]
    fn span_coordinates() {
        let f = Field::Rational;
        let mut s = Span::new(f, 3);
        assert!(s.insert(vec![int(1), int(1), int(0)]));
        assert!(s.insert(vec![int(0), int(1), int(1)]));
        assert!(!s.insert(vec![int(1), int(2), int(1)]));
        let c = s.coordinates(&[int(2), int(3), int(1)]).unwrap();
        assert_eq!(c, vec![int(2), int(1), int(0)]);
        assert!(s.coordinates(&[int(0), int(0), int(1)]).is_none());
    }

    #[test]
    fn field_parsing_and_reduction() {
        assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
        assert_eq!(Field::parse("Fp:5").unwrap(), Field::Prime(5));
        assert!(Field::parse("Fp:6").is_err());
        let f = Field::Prime(5);
        assert_eq!(f.reduce(&crate::exactalg::rat(1, 2)).unwrap(), int(3));
        assert!(f.reduce(&crate::exactalg::rat(1, 5)).is_err());
    }
}
