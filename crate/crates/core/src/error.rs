use std::fmt;
use std::io;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by instance construction, file I/O and solver operations.
///
/// Tour feasibility problems are not errors; they are reported through
/// [`crate::model::ValidationReport`] so that callers can inspect every
/// violated condition at once.
#[derive(Debug)]
pub enum Error {
    /// An instance invariant does not hold (vertex count, forced-edge
    /// structure, non-finite coordinates, ...).
    InvalidInstance(String),
    /// A caller broke a documented precondition.
    ContractViolation(String),
    /// A file exists but its content does not match the expected format.
    MalformedFile(String),
    /// The file declares a format variant this crate does not handle.
    UnsupportedFormat(String),
    /// An exact algorithm was asked to run above its size limit.
    SizeLimit(String),
    /// The destroy operator cannot remove enough edges: fewer than two
    /// non-fixed edges remain, so the level is saturated.
    DestroyInfeasible,
    Io(io::Error),
}

impl Error {
    pub fn invalid_instance(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedFile(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedFormat(msg.into())
    }

    pub fn size_limit(msg: impl Into<String>) -> Self {
        Error::SizeLimit(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInstance(msg) => write!(f, "invalid instance: {msg}"),
            Error::ContractViolation(msg) => write!(f, "contract violation: {msg}"),
            Error::MalformedFile(msg) => write!(f, "malformed file: {msg}"),
            Error::UnsupportedFormat(msg) => write!(f, "unsupported format: {msg}"),
            Error::SizeLimit(msg) => write!(f, "size limit exceeded: {msg}"),
            Error::DestroyInfeasible => {
                write!(f, "destroy infeasible: fewer than two non-fixed edges remain")
            }
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(err: io::Error) -> Self {
        Error::Io(err)
    }
}
