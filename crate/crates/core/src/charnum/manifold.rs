use std::collections::BTreeSet;
use std::fmt;

use super::swpoly::{monomial_degree, SWPolynomial};
use crate::error::{Error, Result};
use crate::exactalg::Rat;
use crate::weightss::linalg::Span;
use crate::weightss::Field;

/// Generator `x` of a truncated polynomial ring `F₂[x]/(x^{height+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub height: u32,
}

/// Element of a tensor product of truncated polynomial rings over F₂, as
/// the set of exponent vectors with coefficient 1.
pub type Element = BTreeSet<Vec<u32>>;

/// Closed manifold given by its mod 2 cohomology ring, total
/// Stiefel–Whitney class and the total square of each ring generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldAtom {
    name: String,
    gens: Vec<Generator>,
    w: Element,
    squares: Vec<Element>,
}

fn toggle(x: &mut Element, e: Vec<u32>) {
    if !x.remove(&e) {
        x.insert(e);
    }
}

fn add(a: &Element, b: &Element) -> Element {
    a.symmetric_difference(b).cloned().collect()
}

impl ManifoldAtom {
    fn build(name: String, gens: Vec<Generator>, w: Element, squares: Vec<Element>) -> Self {
        let m = Self {
            name,
            gens,
            w,
            squares,
        };
        assert!(
            m.w.contains(&vec![0; m.gens.len()]),
            "w has constant term 1"
        );
        m
    }

    fn one_in(gens: &[Generator]) -> Element {
        BTreeSet::from([vec![0; gens.len()]])
    }

    fn gen_in(gens: &[Generator], i: usize) -> Element {
        let mut e = vec![0; gens.len()];
        e[i] = 1;
        let mut x = BTreeSet::new();
        if gens[i].height >= 1 {
            x.insert(e);
        }
        x
    }

    fn mul_in(gens: &[Generator], a: &Element, b: &Element) -> Element {
        let mut out = Element::new();
        for x in a {
            for y in b {
                let e: Vec<u32> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                if e.iter().zip(gens).all(|(k, g)| *k <= g.height) {
                    toggle(&mut out, e);
                }
            }
        }
        out
    }

    fn pow_in(gens: &[Generator], a: &Element, k: u32) -> Element {
        (0..k).fold(Self::one_in(gens), |acc, _| Self::mul_in(gens, &acc, a))
    }

    /// The point.
    pub fn point() -> Self {
        Self::build("pt".into(), Vec::new(), Self::one_in(&[]), Vec::new())
    }

    /// `RPⁿ`: `F₂[a]/(a^{n+1})`, `w = (1+a)^{n+1}`, `Sq a = a + a²`.
    pub fn rp(n: u32) -> Self {
        let gens = vec![Generator {
            name: "a".into(),
            degree: 1,
            height: n,
        }];
        let a = Self::gen_in(&gens, 0);
        let one_a = add(&Self::one_in(&gens), &a);
        let w = Self::pow_in(&gens, &one_a, n + 1);
        let sq = add(&a, &Self::mul_in(&gens, &a, &a));
        Self::build(format!("RP{n}"), gens, w, vec![sq])
    }

    /// Dold manifold `P(m, r)` of dimension `m + 2r`:
    /// `F₂[c, d]/(c^{m+1}, d^{r+1})`, `w = (1+c)^m (1+c+d)^{r+1}`,
    /// `Sq c = c + c²`, `Sq d = d + cd + d²`.
    pub fn dold(m: u32, r: u32) -> Self {
        let gens = vec![
            Generator {
                name: "c".into(),
                degree: 1,
                height: m,
            },
            Generator {
                name: "d".into(),
                degree: 2,
                height: r,
            },
        ];
        let one = Self::one_in(&gens);
        let c = Self::gen_in(&gens, 0);
        let d = Self::gen_in(&gens, 1);
        let w = Self::mul_in(
            &gens,
            &Self::pow_in(&gens, &add(&one, &c), m),
            &Self::pow_in(&gens, &add(&add(&one, &c), &d), r + 1),
        );
        let sq_c = add(&c, &Self::mul_in(&gens, &c, &c));
        let sq_d = add(
            &add(&d, &Self::mul_in(&gens, &c, &d)),
            &Self::mul_in(&gens, &d, &d),
        );
        Self::build(format!("P({m},{r})"), gens, w, vec![sq_c, sq_d])
    }

    /// `Sⁿ` for `n ≥ 1`: `F₂[x]/(x²)`, `w = 1`, `Sq x = x`.
    pub fn sphere(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("sphere dimension must be positive"));
        }
        let gens = vec![Generator {
            name: "x".into(),
            degree: n,
            height: 1,
        }];
        let x = Self::gen_in(&gens, 0);
        Ok(Self::build(
            format!("S{n}"),
            gens.clone(),
            Self::one_in(&gens),
            vec![x],
        ))
    }

    /// Cartesian product; the ring is the tensor product and `w` multiplies.
    pub fn product(&self, other: &Self) -> Self {
        let k = self.gens.len();
        let l = other.gens.len();
        let gens: Vec<Generator> = self.gens.iter().chain(&other.gens).cloned().collect();
        let left = |x: &Element| -> Element {
            x.iter()
                .map(|e| e.iter().copied().chain(std::iter::repeat_n(0, l)).collect())
                .collect()
        };
        let right = |x: &Element| -> Element {
            x.iter()
                .map(|e| std::iter::repeat_n(0, k).chain(e.iter().copied()).collect())
                .collect()
        };
        let w = Self::mul_in(&gens, &left(&self.w), &right(&other.w));
        let squares = self
            .squares
            .iter()
            .map(left)
            .chain(other.squares.iter().map(right))
            .collect();
        let name = match (self.gens.is_empty(), other.gens.is_empty()) {
            (true, _) => other.name.clone(),
            (_, true) => self.name.clone(),
            _ => format!("{} x {}", self.name, other.name),
        };
        Self::build(name, gens, w, squares)
    }

    /// `self^k`.
    pub fn power(&self, k: u32) -> Self {
        (0..k).fold(Self::point(), |acc, _| acc.product(self))
    }

    /// Parses `pt`, `RP<n>`, `S<n>`, `P(<m>,<r>)`, powers `X^k` and
    /// products joined by `x` or `*`, e.g. `RP4 x RP2^2`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Self::point();
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::input("empty manifold name"));
        }
        for factor in s.split(['*', 'x']) {
            let factor = factor.trim();
            let (base, exp) = match factor.rsplit_once('^') {
                Some((b, e)) => (
                    b.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::input(format!("bad exponent in `{factor}`")))?,
                ),
                _ => (factor, 1),
            };
            let num = |t: &str| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::input(format!("unknown manifold `{base}`")))
            };
            let atom = if base == "pt" {
                Self::point()
            } else if let Some(n) = base.strip_prefix("RP") {
                Self::rp(num(n)?)
            } else if let Some(n) = base.strip_prefix('S') {
                Self::sphere(num(n)?)?
            } else if let Some(args) = base.strip_prefix("P(").and_then(|t| t.strip_suffix(')')) {
                let (m, r) = args
                    .split_once(',')
                    .ok_or_else(|| Error::input(format!("expected P(m,r), found `{base}`")))?;
                Self::dold(num(m)?, num(r)?)
            } else {
                return Err(Error::UnknownAtom(base.to_string()));
            };
            out = out.product(&atom.power(exp));
        }
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn dimension(&self) -> u32 {
        self.gens.iter().map(|g| g.degree * g.height).sum()
    }

    fn degree_of(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.gens).map(|(k, g)| k * g.degree).sum()
    }

    pub fn homogeneous(&self, x: &Element, d: u32) -> Element {
        x.iter()
            .filter(|e| self.degree_of(e) == d)
            .cloned()
            .collect()
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        Self::mul_in(&self.gens, a, b)
    }

    pub fn total_sw(&self) -> &Element {
        &self.w
    }

    /// `w_k`.
    pub fn sw_class(&self, k: u32) -> Element {
        self.homogeneous(&self.w, k)
    }

    /// Monomials of degree `d` in the ring.
    pub fn basis(&self, d: u32) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![Vec::new()];
        for g in &self.gens {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..=g.height).map(move |k| {
                        let mut f = e.clone();
                        f.push(k);
                        f
                    })
                })
                .collect();
        }
        out.retain(|e| self.degree_of(e) == d);
        out
    }

    /// Pairing with the fundamental class: the coefficient of the top
    /// monomial.
    pub fn pair(&self, x: &Element) -> bool {
        let top: Vec<u32> = self.gens.iter().map(|g| g.height).collect();
        x.contains(&top)
    }

    /// The Stiefel–Whitney number `⟨w_{j1} ⋯ w_{jk}, [M]⟩`.
    pub fn sw_number(&self, monomial: &[u32]) -> Result<bool> {
        let deg = monomial_degree(monomial);
        if deg != self.dimension() {
            return Err(Error::precondition(
                "degree_matches_dimension",
                format!(
                    "monomial of degree {deg} on {} of dimension {}",
                    self.name,
                    self.dimension()
                ),
            ));
        }
        let x = monomial.iter().fold(Self::one_in(&self.gens), |acc, &j| {
            self.mul(&acc, &self.sw_class(j))
        });
        Ok(self.pair(&x))
    }

    /// Sum of the Stiefel–Whitney numbers of the terms.
    pub fn evaluate(&self, p: &SWPolynomial) -> Result<bool> {
        let mut acc = false;
        for m in p.terms() {
            acc ^= self.sw_number(m)?;
        }
        Ok(acc)
    }

    /// Total square, multiplicative from the squares of the generators.
    pub fn total_sq(&self, x: &Element) -> Element {
        let mut out = Element::new();
        for e in x {
            let mut acc = Self::one_in(&self.gens);
            for (i, &k) in e.iter().enumerate() {
                acc = self.mul(&acc, &Self::pow_in(&self.gens, &self.squares[i], k));
            }
            out = add(&out, &acc);
        }
        out
    }

    /// `Sq^k x`.
    pub fn sq(&self, k: u32, x: &Element) -> Element {
        let mut out = Element::new();
        for e in x {
            let d = self.degree_of(e);
            let single = BTreeSet::from([e.clone()]);
            out = add(&out, &self.homogeneous(&self.total_sq(&single), d + k));
        }
        out
    }

    /// Wu classes `v_0, …, v_n` determined by Poincaré duality,
    /// `⟨v_k x, [M]⟩ = ⟨Sq^k x, [M]⟩` for every `x` of degree `n − k`.
    pub fn wu_from_duality(&self) -> Result<Vec<Element>> {
        let n = self.dimension();
        let f2 = Field::Prime(2);
        let bit = |b: bool| {
            if b {
                Rat::from_integer(1.into())
            } else {
                Rat::from_integer(0.into())
            }
        };
        let mut out = Vec::new();
        for k in 0..=n {
            let low = self.basis(k);
            let high = self.basis(n - k);
            let single = |e: &Vec<u32>| BTreeSet::from([e.clone()]);
            let mut span = Span::new(f2, high.len());
            for m in &low {
                span.insert(
                    high.iter()
                        .map(|x| bit(self.pair(&self.mul(&single(m), &single(x)))))
                        .collect(),
                );
            }
            let target: Vec<Rat> = high
                .iter()
                .map(|x| bit(self.pair(&self.sq(k, &single(x)))))
                .collect();
            let coords = span.coordinates(&target).ok_or_else(|| {
                Error::internal(
                    "poincare_duality",
                    format!("no Wu class v{k} on {}", self.name),
                )
            })?;
            let v: Element = low
                .iter()
                .zip(coords)
                .filter(|(_, c)| !num_traits::Zero::is_zero(c))
                .map(|(m, _)| m.clone())
                .collect();
            out.push(v);
        }
        Ok(out)
    }

    /// Wu's theorem on this manifold: the total square of the Wu class
    /// obtained by duality equals the presented `w`.
    pub fn satisfies_wu(&self) -> Result<bool> {
        let v = self.wu_from_duality()?;
        let total = v.iter().fold(Element::new(), |acc, vk| add(&acc, vk));
        Ok(self.total_sq(&total) == self.w)
    }

    /// Renders an element in the generator names.
    pub fn render(&self, x: &Element) -> String {
        if x.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<&Vec<u32>> = x.iter().collect();
        terms.sort_by(|a, b| self.degree_of(a).cmp(&self.degree_of(b)).then(b.cmp(a)));
        let parts: Vec<String> = terms
            .iter()
            .map(|e| {
                let f: Vec<String> = e
                    .iter()
                    .zip(&self.gens)
                    .enumerate()
                    .filter(|(_, (k, _))| **k > 0)
                    .map(|(i, (k, g))| {
                        let nm = format!("{}{}", g.name, i + 1);
                        if *k == 1 {
                            nm
                        } else {
                            format!("{nm}^{k}")
                        }
                    })
                    .collect();
                if f.is_empty() {
                    "1".into()
                } else {
                    f.join(" ")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for ManifoldAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}
