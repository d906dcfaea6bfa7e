use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailure { attempts: usize, reason: String },

    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("vacuous bound: non-positive base in `{term}`")]
    VacuousBound { term: String },

    #[error("degenerate family: {0}")]
    DegenerateFamily(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the filesystem rather than by bad input values.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
