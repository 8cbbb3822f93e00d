use thiserror::Error;

/// Errors raised anywhere in the workbench.
///
/// Variants fall into three classes that the command-line driver maps onto
/// exit codes: malformed or unresolvable input, violated mathematical
/// preconditions, and internal invariant breaches.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("no exact rational value: {0}")]
    InexactRoot(String),
    #[error("precondition `{invariant}` violated: {detail}")]
    Precondition {
        invariant: &'static str,
        detail: String,
    },
    #[error("internal invariant `{invariant}` breached: {detail}")]
    Internal {
        invariant: &'static str,
        detail: String,
    },
}

/// Coarse classification used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Precondition,
    Internal,
}

impl Error {
    pub fn precondition(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition {
            invariant,
            detail: detail.into(),
        }
    }

    pub fn internal(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Internal {
            invariant,
            detail: detail.into(),
        }
    }

    pub fn input(detail: impl Into<String>) -> Self {
        Error::Input(detail.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Input(_) | Error::UnknownAtom(_) | Error::UnknownReference(_) => {
                ErrorClass::Input
            }
            Error::Internal { .. } => ErrorClass::Internal,
            Error::ZeroDenominator
            | Error::NotInvertible
            | Error::InexactRoot(_)
            | Error::Precondition { .. } => ErrorClass::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
