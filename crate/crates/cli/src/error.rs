use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Data(_) => 3,
            Self::Numeric(_) => 4,
        }
    }
}

impl From<rtkm::Error> for CliError {
    fn from(e: rtkm::Error) -> Self {
        use rtkm::Error as E;
        let msg = e.to_string();
        match e {
            E::InvalidConfig(_) | E::TooFewPoints { .. } | E::InfeasibleSimplex { .. } => {
                Self::Usage(msg)
            }
            E::NonFinite { .. } => Self::Numeric(msg),
            E::DimensionMismatch { .. }
            | E::InvalidData(_)
            | E::Parse { .. }
            | E::Io(_)
            | E::UndefinedMetric(_) => Self::Data(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Data(format!("malformed JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Data(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
