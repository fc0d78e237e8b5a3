use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (dimensions, documents, invalid states).
    #[error("invalid input: {0}")]
    Input(String),

    /// A configured cap (ambient dimension, subset count, ensemble size) was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The simplex kernel hit a pivot below tolerance or lost feasibility.
    #[error("numerical breakdown: {0}")]
    Degenerate(String),

    /// Two independent computations of the same quantity disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    /// An LP that cannot be infeasible for valid input turned out to be.
    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }
}
