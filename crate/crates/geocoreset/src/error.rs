//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its documented range.
    InvalidParameter(String),
    /// Input data violates a structural precondition (duplicate ids, …).
    InvalidInput(String),
    /// Two vertices that must be connected are not.
    Disconnected { a: u64, b: u64 },
    /// A balanced separator could not be found (balance > 2/3 for every candidate).
    SeparatorBalance { achieved: f64 },
    /// A spanner disconnected vertices its host graph connects.
    SpannerDisconnects { a: u64, b: u64 },
    /// Internal cross-check failed; indicates a bug or a broken precondition.
    InternalConsistency(String),
    /// Operation is not defined for this metric family.
    UnsupportedMetric(String),
    /// A size/complexity guard refused to run (e.g. brute force too large).
    GuardExceeded(String),
    /// File or format problem.
    Format(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::Disconnected { a, b } => write!(f, "vertices {a} and {b} are not connected"),
            Error::SeparatorBalance { achieved } => {
                write!(f, "no separator with balance <= 2/3 (best {achieved:.4})")
            }
            Error::SpannerDisconnects { a, b } => {
                write!(f, "spanner disconnects {a} and {b} which the host connects")
            }
            Error::InternalConsistency(m) => write!(f, "internal consistency: {m}"),
            Error::UnsupportedMetric(m) => write!(f, "unsupported metric: {m}"),
            Error::GuardExceeded(m) => write!(f, "guard exceeded: {m}"),
            Error::Format(m) => write!(f, "format: {m}"),
            Error::Io(m) => write!(f, "io: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
