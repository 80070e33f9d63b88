//! Error type shared by all simulators.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    /// Raised when a simulation violates one of its own proof obligations
    /// (e.g. a clear completing after the reading agent arrives). Must never
    /// fire; any occurrence is a bug in the model, not in the input.
    #[error("simulation fault: {0}")]
    SimulationFault(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("sweep failed at n={n}: {source}")]
    Sweep {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_n(self, n: usize) -> Error {
        Error::Sweep {
            n,
            source: Box::new(self),
        }
    }
}
