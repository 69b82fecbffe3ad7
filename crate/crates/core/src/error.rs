use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("unknown alternative {0:?}")]
    UnknownAlternative(String),

    #[error("unknown voter {0:?}")]
    UnknownVoter(String),

    #[error("duplicate name {0:?}")]
    DuplicateName(String),

    #[error("empty name")]
    EmptyName,

    #[error("k out of range: k = {k}, m = {m}")]
    KOutOfRange { k: usize, m: usize },

    #[error("{kind} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("negative utility {value} at position {index}")]
    NegativeUtility { index: usize, value: String },

    #[error("enumeration guard refused: {0}")]
    GuardExceeded(String),

    #[error("rule {0} is not supported here: {1}")]
    UnsupportedRule(crate::model::Rule, &'static str),

    #[error("committee has size {actual}, expected {expected}")]
    WrongCommitteeSize { expected: usize, actual: usize },

    #[error("value {value} at position {index} is outside the mapping's domain")]
    OutOfDomain { index: usize, value: String },

    #[error("invalid source instance: {0}")]
    InvalidSource(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("instance exceeds engine limits: {0}")]
    EngineLimit(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
