use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("layout mismatch: expected dimension {expected}, found {found}")]
    LayoutMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("invalid measurement `{label}`: {reason}")]
    InvalidMeasurement { label: String, reason: String },

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid theory: {0}")]
    InvalidTheory(String),

    #[error("search budget of {budget} candidate assignments exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("unknown theory `{0}`")]
    UnknownTheory(String),

    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),

    #[error("gauge constraint violated: {0}")]
    Gauge(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
