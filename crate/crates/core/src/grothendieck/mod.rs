//! Virtual classes of varieties and their virtual Poincaré polynomials.
//!
//! A [`VirtualClass`] is a formal ℤ-combination of products of named atoms.
//! An [`AtomTable`] fixes a theory (complex with variable `q`, or real with
//! ℤ/2 coefficients and variable `t`), resolves atom names, and evaluates
//! classes. Evaluation is additive and multiplicative, so it is a ring map
//! from formal classes to polynomials.
//!
//! Complex theory: a smooth compact atom with Betti numbers `b_i`
//! contributes `Σ b_i q^(i/2)`; odd Betti numbers land on half-integer
//! exponents. Real theory: `Σ b_i t^i` with ℤ/2 Betti numbers.
//!
//! Symbolic atoms stand for pieces whose polynomial is left unevaluated
//! (for instance the complement of a singular point in a local model);
//! [`AtomTable::vpp_symbolic`] carries them through as formal symbols.

mod parse;
mod real;

pub use parse::parse_class;
pub use real::{GluePiece, GlueTriple, RealGlueDiagram, RealSpace};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{int, Coeff, FracPoly, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theory {
    /// Rational cohomology of complex varieties, polynomial in `q`.
    Complex,
    /// ℤ/2 cohomology of real points, polynomial in `t`.
    Real,
}

impl Theory {
    pub fn var(self) -> &'static str {
        match self {
            Theory::Complex => "q",
            Theory::Real => "t",
        }
    }

    /// Exponent carried by the `i`-th Betti number.
    fn betti_exponent(self, i: usize) -> Rat {
        match self {
            Theory::Complex => Rat::new(BigInt::from(i), BigInt::from(2)),
            Theory::Real => int(i as i64),
        }
    }
}

/// Product of atoms with multiplicities.
pub type Monomial = BTreeMap<String, u32>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(k.clone()).or_insert(0) += v;
    }
    out
}

fn mono_fmt(m: &Monomial) -> String {
    m.iter()
        .map(|(a, k)| {
            if *k == 1 {
                a.clone()
            } else {
                format!("{a}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Formal ℤ-linear combination of atom monomials, in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VirtualClass {
    terms: BTreeMap<Monomial, BigInt>,
}

impl VirtualClass {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `n` times the unit class.
    pub fn integer(n: BigInt) -> Self {
        let mut c = Self::zero();
        c.accumulate(Monomial::new(), n);
        c
    }

    pub fn atom(name: &str) -> Self {
        let mut c = Self::zero();
        c.accumulate(Monomial::from([(name.to_string(), 1)]), BigInt::one());
        c
    }

    pub fn parse(src: &str) -> Result<Self> {
        parse_class(src)
    }

    fn accumulate(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        self.terms
            .keys()
            .flat_map(|m| m.keys().map(String::as_str))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.accumulate(mono_mul(m1, m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::integer(BigInt::one()), |acc, _| acc.mul(self))
    }
}

/// `[X] − [Y]`: the class of the complement of a closed piece.
pub fn complement(x: &VirtualClass, y: &VirtualClass) -> VirtualClass {
    x.sub(y)
}

impl fmt::Display for VirtualClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono_fmt(m))?;
            } else {
                write!(f, "{mag}*{}", mono_fmt(m))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Builtin,
    User,
    Symbolic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub name: String,
    pub kind: AtomKind,
    pub dimension: Option<u32>,
    pub smooth_compact: bool,
    /// `None` for symbolic atoms.
    pub value: Option<FracPoly>,
}

/// Declaration of a user atom with an explicit Betti table.
#[derive(Debug, Clone, PartialEq)]
pub struct UserAtom {
    pub name: String,
    pub dimension: u32,
    pub betti: Vec<u64>,
    pub smooth_compact: bool,
    pub poincare_duality: bool,
}

/// Atom registry for one theory.
#[derive(Debug, Clone)]
pub struct AtomTable {
    theory: Theory,
    user: BTreeMap<String, Atom>,
}

fn geometric(n: u32, exp: impl Fn(u32) -> Rat) -> FracPoly {
    FracPoly::from_terms((0..=n).map(|i| (exp(i), Rat::one())))
}

impl AtomTable {
    pub fn new(theory: Theory) -> Self {
        Self {
            theory,
            user: BTreeMap::new(),
        }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    /// Built-in atoms. Complex: `pt`, `A<n>` (affine space), `Gm`, `P<n>`.
    /// Real: `pt`, `S<n>` (spheres), `RP<n>`.
    pub fn builtin(&self, name: &str) -> Option<Atom> {
        let smooth = |name: &str, dim: u32, value: FracPoly| Atom {
            name: name.to_string(),
            kind: AtomKind::Builtin,
            dimension: Some(dim),
            smooth_compact: true,
            value: Some(value),
        };
        let indexed = |prefix: &str| -> Option<u32> {
            let rest = name.strip_prefix(prefix)?;
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok()
        };
        if name == "pt" {
            return Some(smooth(name, 0, FracPoly::one()));
        }
        match self.theory {
            Theory::Complex => {
                if name == "Gm" {
                    return Some(Atom {
                        smooth_compact: false,
                        ..smooth(name, 1, FracPoly::from_coeffs([-1, 1]))
                    });
                }
                if let Some(n) = indexed("A") {
                    return Some(Atom {
                        smooth_compact: n == 0,
                        ..smooth(name, n, FracPoly::monomial(Rat::one(), int(n as i64)))
                    });
                }
                if let Some(n) = indexed("P") {
                    return Some(smooth(name, n, geometric(n, |i| int(i as i64))));
                }
            }
            Theory::Real => {
                if let Some(n) = indexed("RP") {
                    return Some(smooth(name, n, geometric(n, |i| int(i as i64))));
                }
                if let Some(n) = indexed("S") {
                    let value = if n == 0 {
                        FracPoly::constant(int(2))
                    } else {
                        FracPoly::from_terms([(int(0), int(1)), (int(n as i64), int(1))])
                    };
                    return Some(smooth(name, n, value));
                }
            }
        }
        None
    }

    pub fn define_user(&mut self, spec: UserAtom) -> Result<()> {
        self.check_fresh(&spec.name)?;
        let top = match self.theory {
            Theory::Complex => 2 * spec.dimension as usize,
            Theory::Real => spec.dimension as usize,
        };
        if spec.betti.len() > top + 1 {
            return Err(Error::input(format!(
                "atom `{}`: Betti table has {} entries but dimension allows {}",
                spec.name,
                spec.betti.len(),
                top + 1
            )));
        }
        if spec.poincare_duality {
            let b = |i: usize| spec.betti.get(i).copied().unwrap_or(0);
            if let Some(i) = (0..=top).find(|&i| b(i) != b(top - i)) {
                return Err(Error::precondition(
                    "poincare_duality",
                    format!(
                        "atom `{}`: b_{i} = {} but b_{} = {}",
                        spec.name,
                        b(i),
                        top - i,
                        b(top - i)
                    ),
                ));
            }
        }
        let value = FracPoly::from_terms(
            spec.betti
                .iter()
                .enumerate()
                .map(|(i, &b)| (self.theory.betti_exponent(i), int(b as i64))),
        );
        self.user.insert(
            spec.name.clone(),
            Atom {
                name: spec.name,
                kind: AtomKind::User,
                dimension: Some(spec.dimension),
                smooth_compact: spec.smooth_compact,
                value: Some(value),
            },
        );
        Ok(())
    }

    /// Registers an opaque atom whose polynomial stays symbolic.
    pub fn define_symbolic(&mut self, name: &str, dimension: Option<u32>) -> Result<()> {
        self.check_fresh(name)?;
        self.user.insert(
            name.to_string(),
            Atom {
                name: name.to_string(),
                kind: AtomKind::Symbolic,
                dimension,
                smooth_compact: false,
                value: None,
            },
        );
        Ok(())
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if self.builtin(name).is_some() || self.user.contains_key(name) {
            return Err(Error::input(format!("atom `{name}` is already defined")));
        }
        Ok(())
    }

    pub fn resolve(&self, name: &str) -> Result<Atom> {
        self.user
            .get(name)
            .cloned()
            .or_else(|| self.builtin(name))
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    /// Checks that every atom of the class resolves.
    pub fn check(&self, c: &VirtualClass) -> Result<()> {
        for a in c.atoms() {
            self.resolve(a)?;
        }
        Ok(())
    }

    /// Virtual Poincaré polynomial; symbolic atoms are an error here.
    pub fn vpp(&self, c: &VirtualClass) -> Result<FracPoly> {
        let s = self.vpp_symbolic(c)?;
        match s.concrete() {
            Some(p) => Ok(p),
            None => Err(Error::precondition(
                "no_symbolic_atoms",
                format!("class `{c}` involves symbolic atoms"),
            )),
        }
    }

    /// Virtual Poincaré polynomial with symbolic atoms kept formal.
    pub fn vpp_symbolic(&self, c: &VirtualClass) -> Result<SymbolicSum<FracPoly>> {
        let mut out = SymbolicSum::zero();
        for (m, k) in c.terms() {
            let mut value = FracPoly::constant(Rat::from_integer(k.clone()));
            let mut symbols = Monomial::new();
            for (name, e) in m {
                let atom = self.resolve(name)?;
                match &atom.value {
                    Some(p) => value = &value * &p.pow(*e),
                    None => {
                        symbols.insert(name.clone(), *e);
                    }
                }
            }
            out = out.add(&SymbolicSum::term(symbols, value));
        }
        Ok(out)
    }

    /// Dimension of a class: the largest dimension among its monomials.
    pub fn dimension(&self, c: &VirtualClass) -> Result<Option<u32>> {
        let mut best: Option<u32> = None;
        for (m, _) in c.terms() {
            let mut d = 0;
            for (name, e) in m {
                let atom = self.resolve(name)?;
                let ad = atom.dimension.ok_or_else(|| {
                    Error::input(format!("atom `{name}` has no declared dimension"))
                })?;
                d += ad * e;
            }
            best = Some(best.map_or(d, |b| b.max(d)));
        }
        Ok(best)
    }
}

/// Polynomial in symbolic atoms with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSum<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> SymbolicSum<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut s = Self::zero();
        if !c.is_zero_elem() {
            s.terms.insert(m, c);
        }
        s
    }

    pub fn concrete_value(c: C) -> Self {
        Self::term(Monomial::new(), c)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the empty monomial, if no symbol occurs.
    pub fn concrete(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero_elem()),
            1 => self.terms.get(&Monomial::new()).cloned(),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero_elem)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let next = out.coeff(m).add_elem(c);
            if next.is_zero_elem() {
                out.terms.remove(m);
            } else {
                out.terms.insert(m.clone(), next);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out = out.add(&Self::term(mono_mul(m1, m2), c1.mul_elem(c2)));
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out = out.add(&Self::term(m.clone(), a.mul_elem(c)));
        }
        out
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SymbolicSum<D> {
        let mut out = SymbolicSum::zero();
        for (m, c) in &self.terms {
            out = out.add(&SymbolicSum::term(m.clone(), f(c)));
        }
        out
    }

    /// Renders terms as `(coeff)` for the concrete part and
    /// `(coeff)*[A*B^2]` for symbolic monomials.
    pub fn render(&self, coeff: impl Fn(&C) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.is_empty() {
                    format!("({})", coeff(c))
                } else {
                    format!("({})*[{}]", coeff(c), mono_fmt(m))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex() -> AtomTable {
        AtomTable::new(Theory::Complex)
    }

    fn vpp(src: &str) -> FracPoly {
        complex().vpp(&VirtualClass::parse(src).unwrap()).unwrap()
    }

    #[test]
    fn projective_plane() {
        assert_eq!(vpp("P2"), FracPoly::from_coeffs([1, 1, 1]));
    }

    #[test]
    fn torus_squared() {
        assert_eq!(vpp("Gm*Gm"), FracPoly::from_coeffs([1, -2, 1]));
    }

    #[test]
    fn punctured_plane() {
        assert_eq!(vpp("A2 - pt"), FracPoly::from_coeffs([-1, 0, 1]));
    }

    #[test]
    fn complements() {
        let t = complex();
        let p1 = VirtualClass::parse("P1").unwrap();
        let pt = VirtualClass::parse("pt").unwrap();
        assert_eq!(t.vpp(&complement(&p1, &pt)).unwrap(), FracPoly::x());
        for n in 1..5u32 {
            let pn = VirtualClass::atom(&format!("P{n}"));
            let pn1 = VirtualClass::atom(&format!("P{}", n - 1));
            assert_eq!(
                t.vpp(&complement(&pn, &pn1)).unwrap(),
                FracPoly::monomial(Rat::one(), int(n as i64))
            );
        }
        assert!(complement(&p1, &p1).is_zero());
    }

    #[test]
    fn unknown_atom_is_an_error() {
        let c = VirtualClass::parse("P1*Foo").unwrap();
        assert_eq!(complex().vpp(&c), Err(Error::UnknownAtom("Foo".into())));
    }

    #[test]
    fn user_atoms_enter_at_half_integer_exponents() {
        let mut t = complex();
        t.define_user(UserAtom {
            name: "E".into(),
            dimension: 1,
            betti: vec![1, 2, 1],
            smooth_compact: true,
            poincare_duality: true,
        })
        .unwrap();
        let p = t.vpp(&VirtualClass::atom("E")).unwrap();
        assert_eq!(p.to_string(), "q + 2*q^(1/2) + 1");
    }

    #[test]
    fn duality_violation_rejected() {
        let mut t = complex();
        let err = t
            .define_user(UserAtom {
                name: "Bad".into(),
                dimension: 1,
                betti: vec![1, 0, 2],
                smooth_compact: true,
                poincare_duality: true,
            })
            .unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                invariant: "poincare_duality",
                ..
            }
        ));
        assert!(t
            .define_user(UserAtom {
                name: "P3".into(),
                dimension: 1,
                betti: vec![1],
                smooth_compact: true,
                poincare_duality: false,
            })
            .is_err());
    }

    #[test]
    fn symbolic_atoms_stay_formal() {
        let mut t = complex();
        t.define_symbolic("U", Some(3)).unwrap();
        let c = VirtualClass::parse("U + P1").unwrap();
        assert!(t.vpp(&c).is_err());
        let s = t.vpp_symbolic(&c).unwrap();
        assert_eq!(s.render(|p| p.to_string()), "(q + 1) + (1)*[U]");
        assert_eq!(t.dimension(&c).unwrap(), Some(3));
    }

    #[test]
    fn real_builtins() {
        let t = AtomTable::new(Theory::Real);
        let p = t.vpp(&VirtualClass::parse("S1*S1").unwrap()).unwrap();
        assert_eq!(p.display_in("t").to_string(), "t^2 + 2*t + 1");
        assert_eq!(
            t.vpp(&VirtualClass::atom("RP2")).unwrap(),
            FracPoly::from_coeffs([1, 1, 1])
        );
        assert!(t.vpp(&VirtualClass::atom("Gm")).is_err());
    }
}
