use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),
    /// Evaluation at a singularity of the eigenvalue function.
    #[error("pole: {0}")]
    Pole(String),
    /// A root bracket did not contain a sign change.
    #[error("bracket: {0}")]
    Bracket(String),
    /// A linear system was numerically singular.
    #[error("singular system: {0}")]
    Singular(String),
    /// An iterative method ran out of iterations or refinement depth.
    #[error("no convergence: {0}")]
    Convergence(String),
    /// The true value exceeds the range of `f64`.
    #[error("overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}
