use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    /// The message names the violated precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A truncated series failed to meet its tolerance within the
    /// configured maximum number of terms.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// An experiment configuration violates a theorem hypothesis or is
    /// internally inconsistent.
    #[error("config error: {0}")]
    Config(String),

    /// An internal invariant was violated; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
