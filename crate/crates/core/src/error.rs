use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "eigensolver did not converge: {converged} of {requested} pairs after {iterations} \
         iterations (worst residual estimate {worst_residual:.3e})"
    )]
    ConvergenceFailure {
        requested: usize,
        converged: usize,
        iterations: usize,
        worst_residual: f64,
    },

    #[error("truncation level {requested} exceeds the {available} available eigenpairs")]
    BasisExhausted { requested: usize, available: usize },

    #[error("format error at byte {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("degenerate chain state: {0}")]
    DegenerateState(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(offset: u64, msg: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: msg.into(),
        }
    }
}
