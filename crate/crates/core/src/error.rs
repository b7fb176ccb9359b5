use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed circle system (no circles, or a circle of size zero).
    #[error("invalid circle system: {0}")]
    InvalidSystem(String),

    /// An element or set that does not fit the circle system it is used with.
    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Inputs outside the range where a formula or procedure is defined.
    /// The message names the violated bound.
    #[error("{0}")]
    Domain(String),

    /// A claimed exact division left a remainder.
    #[error("inexact division: {numerator} is not divisible by {denominator}")]
    Inexact {
        numerator: String,
        denominator: String,
    },

    /// An internal invariant of a procedure was violated at runtime.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
