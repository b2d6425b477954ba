//! Library error type.

use alloc::string::String;
use core::fmt;

/// Errors surfaced by the library.
///
/// Absence of a result that may legitimately not exist (no gflow, no
/// solution) is expressed with `Option`, not with an error; `Error` is for
/// violated preconditions and exceeded resource caps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed graph description; `line` is 1-based.
    Parse { line: usize, msg: String },
    /// Matrix dimensions incompatible with the requested operation.
    Dimension { msg: String },
    /// A subset-enumeration or search cap was exceeded.
    CapExceeded { what: &'static str, limit: usize, requested: usize },
    /// An argument violated a documented precondition.
    Precondition { msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Dimension { msg } => write!(f, "dimension mismatch: {msg}"),
            Error::CapExceeded { what, limit, requested } => {
                write!(f, "{what} cap exceeded: {requested} > {limit}")
            }
            Error::Precondition { msg } => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition { msg: msg.into() }
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension { msg: msg.into() }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;
