use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("all input vectors fall below the rank tolerance; span is empty")]
    EmptySpan,

    #[error("interpolation parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("operator does not preserve the codespace (leakage {leakage:.3e})")]
    NotLogical { leakage: f64 },

    #[error("path endpoint does not return to the starting code (min principal cosine {min_cosine:.3e})")]
    NotALoop { min_cosine: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("defect parity: {0}")]
    Parity(String),

    #[error("defect configuration: {0}")]
    Config(String),

    #[error("invalid string evolution at step {step}: {reason}")]
    InvalidEvolution { step: usize, reason: String },

    #[error("hard-core condition violated: {0}")]
    HardCore(String),

    #[error("routing failed: {0}")]
    Routing(String),

    #[error("error set would contain {projected} operators, above the cap of {cap}")]
    TooManyErrors { projected: u128, cap: usize },

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
