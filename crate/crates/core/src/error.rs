use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    /// A parameter makes the estimator numerically meaningless (e.g. a
    /// debiasing denominator that underflows).
    #[error("ill-conditioned estimator: {0}")]
    Conditioning(String),

    #[error("invalid experiment configuration: {0}")]
    Config(String),

    #[error("failed to write output: {0}")]
    Output(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by the environment (files, disks) rather than
    /// by the caller's arguments.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Output(_))
    }
}
