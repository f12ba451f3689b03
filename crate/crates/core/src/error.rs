use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by model construction, metric evaluation and ingest.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncapError {
    /// A value violates a documented precondition.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A law or metric is undefined for the given arguments (e.g. `p = 0`).
    #[error("undefined: {0}")]
    Undefined(String),

    /// An enumeration was asked to do more work than its cap allows.
    #[error("refused: {what} exceeds cap ({size} > {cap})")]
    CapExceeded {
        what: &'static str,
        size: u64,
        cap: u64,
    },

    /// Manifest syntax or semantic error.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown subsystem id {0}")]
    UnknownSubsystem(usize),

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, EncapError>;

pub(crate) fn invalid(msg: impl Into<String>) -> EncapError {
    EncapError::Invalid(msg.into())
}
