//! Virtual Betti numbers of real spaces presented by proper modifications.
//!
//! The real ℤ/2 theory is not evaluated by cutting spaces into points and
//! open pieces. A space is either a class of real atoms, or a triple
//! `(X̃, E, Z)` with `X̃ → X` a proper modification (normalization or blowup)
//! that is an isomorphism off the center `Z ⊂ X` and has exceptional locus
//! `E` over it, giving `[X] = [X̃] − [E] + [Z]`.

use std::collections::BTreeMap;

use super::{AtomTable, Theory, VirtualClass};
use crate::error::{Error, Result};
use crate::exactalg::FracPoly;

/// One entry of a glue triple: a literal class or another named space.
#[derive(Debug, Clone, PartialEq)]
pub enum GluePiece {
    Class(VirtualClass),
    Space(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlueTriple {
    pub normalization: GluePiece,
    pub exceptional: GluePiece,
    pub center: GluePiece,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RealSpace {
    Class(VirtualClass),
    Glue(GlueTriple),
}

/// Named real spaces, each a class or a glue triple over other entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RealGlueDiagram {
    pub spaces: BTreeMap<String, RealSpace>,
}

impl RealGlueDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, space: RealSpace) {
        self.spaces.insert(name.to_string(), space);
    }

    /// Virtual ℤ/2 Betti polynomial in `t` of the named space.
    pub fn real_vb(&self, atoms: &AtomTable, root: &str) -> Result<FracPoly> {
        if atoms.theory() != Theory::Real {
            return Err(Error::input("real_vb requires a real atom table"));
        }
        let mut eval = Evaluator {
            diagram: self,
            atoms,
            done: BTreeMap::new(),
            stack: Vec::new(),
        };
        eval.space(root).map(|(p, _)| p)
    }

    /// The coefficients `a_0, a_1, …` of [`Self::real_vb`].
    pub fn virtual_betti(&self, atoms: &AtomTable, root: &str) -> Result<Vec<num_bigint::BigInt>> {
        let p = self.real_vb(atoms, root)?;
        let top = p
            .highest_exponent()
            .map(|e| e.to_integer())
            .unwrap_or_default();
        let top: usize = top.try_into().unwrap_or(0);
        Ok((0..=top)
            .map(|i| p.coeff(&crate::exactalg::int(i as i64)).to_integer())
            .collect())
    }
}

struct Evaluator<'a> {
    diagram: &'a RealGlueDiagram,
    atoms: &'a AtomTable,
    done: BTreeMap<String, (FracPoly, Option<u32>)>,
    stack: Vec<String>,
}

impl Evaluator<'_> {
    fn space(&mut self, name: &str) -> Result<(FracPoly, Option<u32>)> {
        if let Some(v) = self.done.get(name) {
            return Ok(v.clone());
        }
        if self.stack.iter().any(|s| s == name) {
            let mut cycle = self.stack.clone();
            cycle.push(name.to_string());
            return Err(Error::precondition("acyclic_diagram", cycle.join(" -> ")));
        }
        let space = self
            .diagram
            .spaces
            .get(name)
            .ok_or_else(|| Error::UnknownReference(name.to_string()))?;
        self.stack.push(name.to_string());
        let result = match space {
            RealSpace::Class(c) => self.class(c),
            RealSpace::Glue(t) => self.triple(name, t),
        };
        self.stack.pop();
        let result = result?;
        self.done.insert(name.to_string(), result.clone());
        Ok(result)
    }

    fn class(&self, c: &VirtualClass) -> Result<(FracPoly, Option<u32>)> {
        Ok((self.atoms.vpp(c)?, self.atoms.dimension(c)?))
    }

    fn piece(&mut self, p: &GluePiece) -> Result<(FracPoly, Option<u32>)> {
        match p {
            GluePiece::Class(c) => self.class(c),
            GluePiece::Space(s) => self.space(s),
        }
    }

    fn triple(&mut self, name: &str, t: &GlueTriple) -> Result<(FracPoly, Option<u32>)> {
        let (xt, dim_x) = self.piece(&t.normalization)?;
        let (e, dim_e) = self.piece(&t.exceptional)?;
        let (z, _) = self.piece(&t.center)?;
        if let (Some(de), Some(dx)) = (dim_e, dim_x) {
            if de >= dx {
                return Err(Error::precondition(
                    "exceptional_dimension",
                    format!("space `{name}`: dim E = {de} is not below dim X~ = {dx}"),
                ));
            }
        }
        Ok((&(&xt - &e) + &z, dim_x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn class(s: &str) -> VirtualClass {
        VirtualClass::parse(s).unwrap()
    }

    fn glue(n: &str, e: &str, z: &str) -> RealSpace {
        RealSpace::Glue(GlueTriple {
            normalization: GluePiece::Class(class(n)),
            exceptional: GluePiece::Class(class(e)),
            center: GluePiece::Class(class(z)),
        })
    }

    fn betti(d: &RealGlueDiagram, root: &str) -> Vec<i64> {
        d.virtual_betti(&AtomTable::new(Theory::Real), root)
            .unwrap()
            .into_iter()
            .map(|b: BigInt| b.try_into().unwrap())
            .collect()
    }

    #[test]
    fn circles_glued_at_a_point() {
        let mut d = RealGlueDiagram::new();
        d.insert("X", glue("2*S1", "2*pt", "pt"));
        assert_eq!(betti(&d, "X"), vec![1, 2]);
    }

    #[test]
    fn circle_with_two_points_identified() {
        let mut d = RealGlueDiagram::new();
        d.insert("Y", glue("S1", "2*pt", "pt"));
        assert_eq!(betti(&d, "Y"), vec![0, 1]);
    }

    #[test]
    fn closed_manifold_without_glue() {
        let mut d = RealGlueDiagram::new();
        d.insert("C", RealSpace::Class(class("S1")));
        assert_eq!(betti(&d, "C"), vec![1, 1]);
    }

    #[test]
    fn nested_and_cyclic_diagrams() {
        let mut d = RealGlueDiagram::new();
        d.insert("Y", glue("S1", "2*pt", "pt"));
        d.insert(
            "W",
            RealSpace::Glue(GlueTriple {
                normalization: GluePiece::Space("Y".into()),
                exceptional: GluePiece::Class(class("pt")),
                center: GluePiece::Class(class("pt")),
            }),
        );
        assert_eq!(betti(&d, "W"), vec![0, 1]);

        d.insert(
            "Y",
            RealSpace::Glue(GlueTriple {
                normalization: GluePiece::Space("W".into()),
                exceptional: GluePiece::Class(class("pt")),
                center: GluePiece::Class(class("pt")),
            }),
        );
        let err = d.real_vb(&AtomTable::new(Theory::Real), "W").unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                invariant: "acyclic_diagram",
                ..
            }
        ));
    }

    #[test]
    fn exceptional_locus_must_be_smaller() {
        let mut d = RealGlueDiagram::new();
        d.insert("B", glue("S1", "S1", "pt"));
        assert!(d.real_vb(&AtomTable::new(Theory::Real), "B").is_err());
        assert_eq!(
            d.real_vb(&AtomTable::new(Theory::Real), "missing"),
            Err(Error::UnknownReference("missing".into()))
        );
    }
}
