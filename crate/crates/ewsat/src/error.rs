//! Error taxonomy shared across the crate.
//!
//! Four classes, mapped to distinct process exit codes by the CLI:
//! usage errors (violated preconditions, malformed arguments), parse
//! errors (with 1-based line numbers), capacity errors (an input exceeds
//! a guard that keeps a search desk-feasible), and internal errors
//! (a proven invariant failed, which means a bug).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
