use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across data handling, training, and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The request needs `prior_pos != 0.5`.
    #[error("{0} is undefined at balanced prior (pi_+ = 0.5); pairs alone cannot tell the classes apart")]
    BalancedPrior(&'static str),

    #[error("non-finite objective encountered at epoch {epoch}")]
    NonFinite { epoch: usize },

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:.3e}); leading eigenpair may be near-degenerate")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("dimension {dim} exceeds the dense limit {limit}; use gradient training instead")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
