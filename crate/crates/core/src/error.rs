use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed arguments: bad parameters, duplicate entries, cyclic relations.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A real argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter point where the requested quantity is undefined by convention.
    #[error("degenerate case: {0}")]
    Degenerate(String),
    /// The request exceeds a supported enumeration or memory budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// An exactness check failed; this always indicates a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn resource(msg: impl Into<String>) -> Error {
    Error::Resource(msg.into())
}
