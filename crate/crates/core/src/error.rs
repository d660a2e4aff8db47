use thiserror::Error;

/// Errors produced by optimizer components.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of its admissible range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// An argument violates a function precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An operation was called on data in the wrong state
    /// (e.g. sorting an unevaluated population).
    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
