use std::fmt;

/// Errors reported by game construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violates a documented precondition (bad dimensions,
    /// out-of-range fields, weights that do not sum to one, ...).
    InvalidArgument(String),
    /// The requested quantity is undefined for these parameter values
    /// (e.g. an indifference allocation for a dominant-strategy type).
    Domain(String),
    /// The operation was called in a game regime it does not apply to
    /// (e.g. equilibrium-slice queries outside the mixed-strategy cases).
    State(String),
    /// The request exceeds a hard enumeration limit.
    Resource(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::State(msg) => write!(f, "state error: {msg}"),
            Error::Resource(msg) => write!(f, "resource error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
