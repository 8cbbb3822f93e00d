use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exactalg::{parse_rat, Rat};

/// Schema tag every document must carry.
pub const SCHEMA: &str = "singinv/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JobKind {
    Vpp,
    RealVb,
    Stringy,
    WeightSs,
    Elliptic,
    Charnum,
}

impl JobKind {
    pub fn name(self) -> &'static str {
        match self {
            JobKind::Vpp => "vpp",
            JobKind::RealVb => "real-vb",
            JobKind::Stringy => "stringy",
            JobKind::WeightSs => "weight-ss",
            JobKind::Elliptic => "elliptic",
            JobKind::Charnum => "charnum",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocOptions {
    pub order: Option<u32>,
    pub field: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema: String,
    pub job: JobKind,
    #[serde(default)]
    pub options: DocOptions,
    pub payload: serde_json::Value,
}

/// Exact number written as a JSON integer or a string `"p/q"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RatDoc {
    Int(i64),
    Str(String),
}

impl RatDoc {
    pub fn value(&self) -> Result<Rat> {
        match self {
            RatDoc::Int(n) => Ok(Rat::from_integer((*n).into())),
            RatDoc::Str(s) => parse_rat(s),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoryDoc {
    #[default]
    Complex,
    Real,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub name: String,
    pub dimension: u32,
    pub betti: Vec<u64>,
    #[serde(default = "yes")]
    pub smooth_compact: bool,
    #[serde(default = "yes")]
    pub poincare_duality: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicDoc {
    pub name: String,
    pub dimension: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VppPayload {
    #[serde(default)]
    pub theory: TheoryDoc,
    #[serde(default)]
    pub atoms: Vec<AtomDoc>,
    #[serde(default)]
    pub symbolic: Vec<SymbolicDoc>,
    pub classes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PieceDoc {
    Class(String),
    Space(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlueDoc {
    pub normalization: PieceDoc,
    pub exceptional: PieceDoc,
    pub center: PieceDoc,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceDoc {
    Class(String),
    Glue(GlueDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealVbPayload {
    #[serde(default)]
    pub atoms: Vec<AtomDoc>,
    pub spaces: BTreeMap<String, SpaceDoc>,
    pub targets: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDoc {
    pub name: String,
    pub discrepancy: RatDoc,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrataKind {
    Closed,
    Open,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrataDoc {
    pub kind: StrataKind,
    /// Keys are comma-separated divisor names, `""` for the empty set.
    pub classes: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDoc {
    pub ambient: String,
    #[serde(default)]
    pub divisors: Vec<DivisorDoc>,
    pub strata: StrataDoc,
    /// Class whose virtual Poincaré polynomial `p_str` is compared with.
    pub expect: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringyPayload {
    #[serde(default)]
    pub theory: TheoryDoc,
    #[serde(default)]
    pub atoms: Vec<AtomDoc>,
    #[serde(default)]
    pub symbolic: Vec<SymbolicDoc>,
    pub models: BTreeMap<String, ResolutionDoc>,
    #[serde(default)]
    pub compare: Vec<[String; 2]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiPieceDoc {
    pub name: String,
    pub betti: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct D1Doc {
    pub i: usize,
    pub j: usize,
    pub matrix: Vec<Vec<RatDoc>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightPayload {
    Toric {
        n: usize,
    },
    Snc {
        components: usize,
        strata: Vec<Vec<BettiPieceDoc>>,
        #[serde(default)]
        d1: Vec<D1Doc>,
    },
    Filtered {
        lowest_degree: i64,
        levels: Vec<Vec<i64>>,
        differentials: Vec<Vec<Vec<RatDoc>>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllDivisorDoc {
    pub name: String,
    pub class: BTreeMap<String, RatDoc>,
    pub discrepancy: RatDoc,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    pub dimension: u32,
    pub basis: Vec<(String, u32)>,
    #[serde(default)]
    pub products: Vec<(String, String, BTreeMap<String, RatDoc>)>,
    pub integrals: BTreeMap<String, RatDoc>,
    pub chern: Vec<BTreeMap<String, RatDoc>>,
    #[serde(default)]
    pub divisors: Vec<EllDivisorDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum EllModelDoc {
    ProjectiveSpace(u32),
    BlownUpPlane(RatDoc),
    Ring(RingDoc),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipticPayload {
    pub models: BTreeMap<String, EllModelDoc>,
    #[serde(default)]
    pub compare: Vec<[String; 2]>,
    #[serde(default)]
    pub chi_y: Vec<String>,
    #[serde(default)]
    pub crepant_factor: bool,
    #[serde(default)]
    pub theta_samples: Vec<ThetaSampleDoc>,
    /// `q`-order of the product expansion used for the samples.
    pub theta_order: Option<u32>,
}

/// Sample point `(z, τ)`, each as `[re, im]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaSampleDoc {
    pub z: [f64; 2],
    pub tau: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwNumberDoc {
    pub manifold: String,
    pub monomial: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDoc {
    pub i: u32,
    pub polynomial: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlopDoc {
    pub a: u32,
    #[serde(default)]
    pub probes: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharnumPayload {
    #[serde(default)]
    pub sw_numbers: Vec<SwNumberDoc>,
    #[serde(default)]
    pub steenrod: Vec<SquareDoc>,
    #[serde(default)]
    pub wu_classes: Vec<u32>,
    #[serde(default)]
    pub span_ranks: Vec<u32>,
    #[serde(default)]
    pub span_equivalence: Vec<u32>,
    #[serde(default)]
    pub flop: Vec<FlopDoc>,
    #[serde(default)]
    pub ochanine: Vec<u32>,
}

fn located(prefix: &str, e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    let inner = e.into_inner();
    let at = if path == "." {
        prefix.to_string()
    } else {
        format!("{prefix}.{path}")
    };
    Error::input(format!("{at}: {inner}"))
}

/// Parses the envelope of a document.
pub fn parse_document(src: &str) -> Result<Document> {
    let de = &mut serde_json::Deserializer::from_str(src);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let (line, col) = (e.inner().line(), e.inner().column());
        let path = e.path().to_string();
        Error::input(format!(
            "{path} (line {line}, column {col}): {}",
            e.into_inner()
        ))
    })?;
    if doc.schema != SCHEMA {
        return Err(Error::input(format!(
            "schema: expected `{SCHEMA}`, found `{}`",
            doc.schema
        )));
    }
    Ok(doc)
}

/// Parses a payload into its typed form.
pub fn parse_payload<T: DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| located("payload", e))
}
