use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {0:?} lies outside the box")]
    OutsideBox(Vec<f64>),

    #[error("bisection bracket failure: E({lo}) = {e_lo}, E({hi}) = {e_hi}")]
    Bracket { lo: f64, hi: f64, e_lo: f64, e_hi: f64 },

    #[error("need at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },

    #[error("property {0} does not hold even on the complete graph")]
    Unattainable(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
