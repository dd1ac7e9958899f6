use thiserror::Error;

use crate::expr::ParseError;
use crate::volterra::SolveReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// Picard iteration grew for too many consecutive sweeps, blew up, or
    /// ran out of iterations. The partial trace is kept for diagnostics.
    #[error("fixed-point iteration diverged after {} iterations", .0.iterations)]
    Divergence(Box<SolveReport>),

    #[error("singular nonlocal denominator: {0}")]
    Singularity(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("series accuracy error: {0}")]
    Accuracy(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
