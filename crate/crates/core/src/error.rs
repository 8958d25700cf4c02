use std::path::PathBuf;

use thiserror::Error;

use crate::monitoring::StopResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A non-finite or otherwise unusable observation.
    #[error("invalid input: {0}")]
    Input(String),

    /// An estimator queried before enough pairs were observed.
    #[error("not enough observations: {0}")]
    State(String),

    /// A replayed stream ran out before the stopping rule fired.
    #[error("stream exhausted after {} pairs without stopping", .partial.n_stop)]
    InsufficientData { partial: Box<StopResult> },

    #[error("{path}:{line}: {message}")]
    Config { path: PathBuf, line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
