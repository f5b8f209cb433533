use std::fmt;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A value fell outside the interval or range required by an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid `(n, alpha)` parameters.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// A denominator of zero (or a sign that makes the expression undefined).
    #[error("zero or invalid denominator: {0}")]
    ZeroDenominator(String),
    /// Two surds live in incompatible quadratic fields for this operation.
    #[error("incompatible radicals: sqrt({0}) vs sqrt({1})")]
    MixedRadicals(String, String),
    /// A discriminant that must be positive was not.
    #[error("non-positive discriminant: {0}")]
    NonPositiveDiscriminant(String),
    /// The operation requires a specific arrangement shape.
    #[error("arrangement mismatch: {0}")]
    ArrangementMismatch(String),
    /// Parse failure for a surd/rational/decimal literal.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
