use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition.
    Validation(String),
    /// Unknown model, family or question.
    NotFound(String),
    /// Budget outside `[0, l_max]`.
    OutOfRange { budget: u64, l_max: u64 },
    /// Input for which the requested quantity is undefined (e.g. zero reference area).
    Degenerate(String),
    /// A computation produced a non-finite value.
    Numeric(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(msg) => write!(f, "validation error: {msg}"),
            Error::NotFound(what) => write!(f, "not found: {what}"),
            Error::OutOfRange { budget, l_max } => {
                write!(f, "budget {budget} is outside [0, {l_max}]")
            }
            Error::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
