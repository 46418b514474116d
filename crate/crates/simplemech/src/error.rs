//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by distribution algebra, instance validation, solvers and
/// experiment harnesses.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received an invalid argument.
    #[error("invalid {field}: {message}")]
    InvalidParameter {
        /// Name of the offending field or argument.
        field: &'static str,
        /// Human-readable description of the violation.
        message: String,
    },

    /// A computation would exceed a configured size cap.
    #[error("size cap exceeded in {what}: {size} > {cap}")]
    SizeCap {
        /// What grew too large (e.g. "convolution support", "joint types").
        what: &'static str,
        /// Actual size encountered.
        size: u64,
        /// Configured cap.
        cap: u64,
    },

    /// Instance file failed schema validation.
    #[error("schema error at {path}: {message}")]
    Schema {
        /// JSON-path-like location of the problem.
        path: String,
        /// Description of the violation.
        message: String,
    },

    /// The LP solver failed to produce a certified optimum.
    #[error("solver error: {0}")]
    Solver(String),

    /// Precondition of a numeric check was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// I/O failure while reading or writing artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }
}
