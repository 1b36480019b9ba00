use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector norm {norm} exceeds the unit ball")]
    NormViolation { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("agent index {index} out of range for {n} agents")]
    AgentOutOfRange { index: usize, n: usize },

    #[error("operation not available in the current phase: {0}")]
    WrongPhase(String),

    #[error("horizon of {horizon} items exhausted")]
    HorizonExceeded { horizon: usize },

    #[error("non-finite value encountered at step {t}")]
    NonFinite { t: usize },

    #[error("{path}: line {line}: {msg}")]
    Malformed {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
