use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates the documented precondition of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A covariance matrix fails positivity or the uncertainty relation.
    #[error("unphysical state: {0}")]
    UnphysicalState(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn unphysical(msg: impl Into<String>) -> Error {
    Error::UnphysicalState(msg.into())
}
