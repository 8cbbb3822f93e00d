//! Stringy Poincaré functions of log-terminal spaces from resolution data.
//!
//! A [`ResolutionModel`] records a resolution `X → Y` with simple normal
//! crossing exceptional divisors `E_j` of discrepancy `a_j`, together with
//! the classes of the strata `E_J` (closed) or `E_J⁰` (open). The stringy
//! function is
//!
//! ```text
//! p_str(Y) = Σ_J p(E_J⁰) Π_{j∈J} (q − 1)/(q^{a_j+1} − 1)
//! ```
//!
//! For the real theory the same sum is taken with `t` in place of `q`.
//! Symbolic atoms pass through as formal symbols, so local models can be
//! compared without a compactification.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{int, FracPoly, Rat, RatFunc};
use crate::grothendieck::{AtomTable, SymbolicSum, Theory, VirtualClass};

/// A set of divisor indices, bit `j` standing for divisor `j`.
pub type Subset = u32;

pub const MAX_DIVISORS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Divisor {
    pub name: String,
    pub discrepancy: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strata {
    /// `[E_J]` for every nonempty `J`; `[E_∅]` may be given and must then
    /// agree with the ambient class.
    Closed(BTreeMap<Subset, VirtualClass>),
    /// `[E_J⁰]` for every `J`, including `∅`. Missing entries are empty.
    Open(BTreeMap<Subset, VirtualClass>),
}

#[derive(Debug, Clone)]
pub struct ResolutionModel {
    pub atoms: AtomTable,
    pub ambient: VirtualClass,
    pub divisors: Vec<Divisor>,
    pub strata: Strata,
}

pub fn subset_len(j: Subset) -> u32 {
    j.count_ones()
}

/// Formats a subset through divisor names, `{}` for the empty set.
pub fn subset_name(m: &ResolutionModel, j: Subset) -> String {
    let names: Vec<&str> = m
        .divisors
        .iter()
        .enumerate()
        .filter(|(i, _)| j & (1 << i) != 0)
        .map(|(_, d)| d.name.as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

impl ResolutionModel {
    pub fn theory(&self) -> Theory {
        self.atoms.theory()
    }

    fn full(&self) -> Subset {
        ((1u64 << self.divisors.len()) - 1) as Subset
    }

    fn check_shape(&self) -> Result<()> {
        if self.divisors.len() > MAX_DIVISORS {
            return Err(Error::input(format!(
                "at most {MAX_DIVISORS} divisors are supported"
            )));
        }
        let full = self.full();
        let keys = match &self.strata {
            Strata::Closed(s) | Strata::Open(s) => s.keys(),
        };
        for &j in keys {
            if j & !full != 0 {
                return Err(Error::input(format!(
                    "stratum index {j:#b} names an unknown divisor"
                )));
            }
        }
        Ok(())
    }

    /// Checks the log-terminal condition `a_j > −1`.
    pub fn check_log_terminal(&self) -> Result<()> {
        for d in &self.divisors {
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
        Ok(())
    }
}

/// Open strata `[E_J⁰] = Σ_{J′ ⊇ J} (−1)^{|J′∖J|} [E_{J′}]`.
pub fn open_strata(m: &ResolutionModel) -> Result<BTreeMap<Subset, VirtualClass>> {
    m.check_shape()?;
    let full = m.full();
    match &m.strata {
        Strata::Open(open) => {
            let mut total = SymbolicSum::zero();
            for c in open.values() {
                total = total.add(&m.atoms.vpp_symbolic(c)?);
            }
            if total != m.atoms.vpp_symbolic(&m.ambient)? {
                return Err(Error::precondition(
                    "strata_partition",
                    "open strata do not add up to the ambient class".to_string(),
                ));
            }
            Ok((0..=full)
                .map(|j| (j, open.get(&j).cloned().unwrap_or_default()))
                .collect())
        }
        Strata::Closed(closed) => {
            if let Some(e0) = closed.get(&0) {
                if m.atoms.vpp_symbolic(e0)? != m.atoms.vpp_symbolic(&m.ambient)? {
                    return Err(Error::precondition(
                        "empty_stratum_is_ambient",
                        format!(
                            "[E_{{}}] = {e0} differs from the ambient class {}",
                            m.ambient
                        ),
                    ));
                }
            }
            let get = |j: Subset| -> Result<VirtualClass> {
                if j == 0 {
                    return Ok(m.ambient.clone());
                }
                closed.get(&j).cloned().ok_or_else(|| {
                    Error::input(format!("closed stratum {} is missing", subset_name(m, j)))
                })
            };
            let mut out = BTreeMap::new();
            for j in 0..=full {
                let mut acc = VirtualClass::zero();
                let rest = full & !j;
                // Enumerate all K ⊆ rest; J′ = J ∪ K.
                let mut k = rest;
                loop {
                    let term = get(j | k)?;
                    acc = if subset_len(k).is_multiple_of(2) {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                    if k == 0 {
                        break;
                    }
                    k = (k - 1) & rest;
                }
                out.insert(j, acc);
            }
            Ok(out)
        }
    }
}

/// `(x − 1)/(x^{a+1} − 1)` in canonical form.
pub fn divisor_factor(a: &Rat) -> Result<RatFunc> {
    let e = a + Rat::one();
    if e <= Rat::zero() {
        return Err(Error::precondition(
            "log_terminal",
            format!("discrepancy {a} <= -1"),
        ));
    }
    let num = FracPoly::from_coeffs([-1, 1]);
    let den = FracPoly::from_terms([(int(0), int(-1)), (e, int(1))]);
    RatFunc::normalize(&num, &den)
}

fn stringy_sum(m: &ResolutionModel) -> Result<SymbolicSum<RatFunc>> {
    m.check_log_terminal()?;
    let open = open_strata(m)?;
    let factors = m
        .divisors
        .iter()
        .map(|d| divisor_factor(&d.discrepancy))
        .collect::<Result<Vec<_>>>()?;
    let mut total = SymbolicSum::zero();
    for (&j, class) in &open {
        let mut weight = RatFunc::one();
        for (i, f) in factors.iter().enumerate() {
            if j & (1 << i) != 0 {
                weight = weight.mul(f);
            }
        }
        let p = m
            .atoms
            .vpp_symbolic(class)?
            .map(|c| RatFunc::from(c.clone()));
        total = total.add(&p.mul_coeff(&weight));
    }
    Ok(total)
}

/// Stringy Poincaré function in `q` of a complex model.
pub fn stringy_poincare(m: &ResolutionModel) -> Result<SymbolicSum<RatFunc>> {
    if m.theory() != Theory::Complex {
        return Err(Error::input("stringy_poincare expects a complex model"));
    }
    stringy_sum(m)
}

/// The ℤ/2 analogue in `t` of a real model.
pub fn stringy_real(m: &ResolutionModel) -> Result<SymbolicSum<RatFunc>> {
    if m.theory() != Theory::Real {
        return Err(Error::input("stringy_real expects a real model"));
    }
    stringy_sum(m)
}

/// Stringy function in the model's own theory.
pub fn stringy(m: &ResolutionModel) -> Result<SymbolicSum<RatFunc>> {
    stringy_sum(m)
}

/// Whether two models of the same space give identical stringy functions.
pub fn check_independence(m1: &ResolutionModel, m2: &ResolutionModel) -> Result<bool> {
    if m1.theory() != m2.theory() {
        return Ok(false);
    }
    Ok(stringy_sum(m1)? == stringy_sum(m2)?)
}

/// Coefficientwise limit at `q = 1`, if every coefficient has one.
pub fn value_at_one(s: &SymbolicSum<RatFunc>) -> Option<SymbolicSum<Rat>> {
    let mut out = SymbolicSum::zero();
    for (mono, c) in s.terms() {
        out = out.add(&SymbolicSum::term(mono.clone(), c.value_at_one()?));
    }
    Some(out)
}
