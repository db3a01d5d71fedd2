use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("capped simplex with mass {mass} in dimension {dim} is empty")]
    InfeasibleSimplex { mass: f64, dim: usize },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("requested {k} clusters but only {n} points are available")]
    TooFewPoints { k: usize, n: usize },

    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
