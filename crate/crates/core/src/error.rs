use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numeric core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors that must share a dimension do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A documented precondition does not hold.
    Contract(String),
    /// A point does not strictly dominate the reference point.
    NotDominatingReference { index: usize },
    /// A requested size is unattainable or overflows.
    Size(String),
    /// Sampling could not produce enough distinct points.
    Sampling(String),
    /// An index is out of range.
    Index { index: usize, len: usize },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn size(msg: impl Into<String>) -> Self {
        Error::Size(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::NotDominatingReference { index } => {
                write!(f, "point {index} does not strictly dominate the reference point")
            }
            Error::Size(msg) => write!(f, "size error: {msg}"),
            Error::Sampling(msg) => write!(f, "sampling error: {msg}"),
            Error::Index { index, len } => write!(f, "index {index} out of range for length {len}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
