//! Command-line driver: JSON job documents in, deterministic reports out.

mod doc;
mod jobs;

use serde_json::{json, Value};

pub use doc::{parse_document, JobKind, SCHEMA};

use crate::elliptic::DEFAULT_ORDER;
use crate::error::{Error, ErrorClass, Result};
use crate::weightss::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(Error::input(format!(
                "unknown format `{s}`, expected text or json"
            ))),
        }
    }
}

/// Command-line overrides; unset fields fall back to the document's
/// `options` and then to the defaults (order 3, field Q, text).
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub order: Option<u32>,
    pub field: Option<Field>,
    pub format: Option<Format>,
}

/// Runs a document and renders the report.
pub fn run(src: &str, overrides: &Options) -> Result<String> {
    let doc = parse_document(src)?;
    let order = overrides
        .order
        .or(doc.options.order)
        .unwrap_or(DEFAULT_ORDER);
    let field = match (overrides.field, &doc.options.field) {
        (Some(f), _) => f,
        (None, Some(s)) => Field::parse(s).map_err(|e| prefix("options.field", e))?,
        (None, None) => Field::Rational,
    };
    let format = match (overrides.format, &doc.options.format) {
        (Some(f), _) => f,
        (None, Some(s)) => Format::parse(s).map_err(|e| prefix("options.format", e))?,
        (None, None) => Format::Text,
    };
    let results = match doc.job {
        JobKind::Vpp => jobs::vpp(&doc.payload)?,
        JobKind::RealVb => jobs::real_vb(&doc.payload)?,
        JobKind::Stringy => jobs::stringy_job(&doc.payload)?,
        JobKind::WeightSs => jobs::weight_ss(&doc.payload, field)?,
        JobKind::Elliptic => jobs::elliptic(&doc.payload, order)?,
        JobKind::Charnum => jobs::charnum(&doc.payload)?,
    };
    let report = json!({
        "schema": SCHEMA,
        "job": doc.job.name(),
        "results": results,
    });
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report)
                .map_err(|e| Error::internal("serialization", e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => render_text(&report),
    })
}

fn prefix(path: &str, e: Error) -> Error {
    match e {
        Error::Input(s) => Error::Input(format!("{path}: {s}")),
        other => other,
    }
}

/// Exit code for an error: 2 input, 3 precondition, 4 internal.
pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Input => 2,
        ErrorClass::Precondition => 3,
        ErrorClass::Internal => 4,
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_))) => Some(format!(
            "[{}]",
            a.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

fn text_into(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_into(x, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_into(x, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Indented `key: value` rendering of a report.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    text_into(v, 0, &mut out);
    out
}
