//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the clustering library.
///
/// The variants mirror the failure classes the CLI maps to exit codes:
/// data problems ([`Error::Parse`], [`Error::Validation`], [`Error::Io`])
/// versus caller problems ([`Error::Config`], [`Error::Domain`]).
#[derive(Debug, Error)]
pub enum Error {
    /// A row of an input file could not be parsed. `row` is the 1-based line number.
    #[error("parse error at line {row}: {reason}")]
    Parse { row: usize, reason: String },

    /// Input data violates a declared invariant (e.g. a coordinate outside the range).
    #[error("validation error: {0}")]
    Validation(String),

    /// Missing or inconsistent configuration (e.g. no range metadata).
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
