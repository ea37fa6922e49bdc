use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments, flags or parameters supplied by the caller.
    #[error("{0}")]
    Usage(String),
    /// Input content that violates the expected schema or value domain.
    #[error("{msg}")]
    Data { msg: String, line: Option<usize> },
    /// Structurally malformed input file.
    #[error("{0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl fmt::Display) -> Self {
        Error::Usage(msg.to_string())
    }

    pub fn data(msg: impl fmt::Display) -> Self {
        Error::Data { msg: msg.to_string(), line: None }
    }

    pub fn data_at(line: usize, msg: impl fmt::Display) -> Self {
        Error::Data { msg: msg.to_string(), line: Some(line) }
    }

    pub fn format(msg: impl fmt::Display) -> Self {
        Error::Format(msg.to_string())
    }

    /// Process exit code: 2 for usage errors, 3 for data, format and I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Data { .. } | Error::Format(_) | Error::Io { .. } => 3,
        }
    }
}
