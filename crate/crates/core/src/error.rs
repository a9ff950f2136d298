use std::path::PathBuf;

use thiserror::Error;

use crate::measures::ConvergenceTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("map `{map}` produced a non-finite value at ({x}, {y})")]
    NonFiniteResult { map: String, x: f64, y: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("{maps} maps but {probs} probabilities")]
    LengthMismatch { maps: usize, probs: usize },

    #[error("orbit diverged at step {step}")]
    Diverged { step: usize },

    #[error("invalid Dirichlet concentration: {0}")]
    InvalidAlphas(String),

    #[error("resampling cap must be at least 1")]
    InvalidCap,

    #[error("combined support of {atoms} atoms exceeds the exact solver limit of {limit}")]
    SupportTooLarge { atoms: usize, limit: usize },

    #[error("no convergence after {max_steps} steps")]
    NoConvergence {
        max_steps: usize,
        trace: Box<ConvergenceTrace>,
    },

    #[error("singular Jacobian (zero norm) at step {step}")]
    LogOfZero { step: usize },

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("only {found} scales survived the fit window, need at least 3")]
    InsufficientScales { found: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid config: {0}")]
    Validation(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Diverged { .. } => 2,
            Error::Io { .. } => 3,
            _ => 1,
        }
    }
}
