//! Error type shared by every module in the crate.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a precondition (shape, range, or non-finite values).
    InvalidInput(String),
    /// An iterative routine exhausted its budget without converging.
    NumericalFailure(String),
    /// Channel draws kept producing rank-deficient realizations.
    RejectedRealization { attempts: u32 },
    /// File or stream I/O failed (only reachable from `std` consumers).
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::RejectedRealization { attempts } => {
                write!(
                    f,
                    "rejected {attempts} degenerate channel realizations in a row"
                )
            }
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Shorthand for an [`Error::InvalidInput`] with a formatted message.
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::InvalidInput(msg.into())
    }
}
