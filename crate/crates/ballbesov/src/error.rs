//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree {degree} out of range (max {max})")]
    DegreeOutOfRange { degree: u32, max: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical precondition violated: {0}")]
    Precondition(String),

    #[error("truncation insufficient: {0}")]
    Truncation(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error class: 2 for input problems, 3 for
    /// numerical preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::InvalidParameter(_) => 2,
            Error::Precondition(_)
            | Error::Truncation(_)
            | Error::NonFinite(_)
            | Error::DimensionMismatch { .. }
            | Error::DegreeOutOfRange { .. } => 3,
        }
    }
}
