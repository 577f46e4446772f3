use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, QmcError>;

#[derive(Debug, Error)]
pub enum QmcError {
    /// A generator was asked for more points (or dimensions) than it can produce.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Incompatible or malformed combination of options.
    #[error("usage error: {0}")]
    Usage(String),

    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A covariance matrix could not be factored.
    #[error("factorization error: {0}")]
    Factorization(String),

    /// A point on the boundary of the unit cube reached an unbounded transform.
    #[error("boundary error at point {index}: coordinate {coordinate} is {value}")]
    Boundary {
        index: usize,
        coordinate: usize,
        value: f64,
    },

    /// An intermediate density vanished (or was unavailable) along a transform ladder.
    #[error("weight error at point {index}, step {step} ({name}): {message}")]
    Weight {
        index: usize,
        step: usize,
        name: String,
        message: String,
    },

    #[error("evaluation error at point {index}: {message}")]
    Evaluation { index: usize, message: String },
}

impl QmcError {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        QmcError::Usage(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QmcError::Domain(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        QmcError::Capacity(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        QmcError::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Re-tag a per-point error with its index in the enclosing block.
    pub(crate) fn at_index(self, index: usize) -> Self {
        match self {
            QmcError::Boundary {
                coordinate, value, ..
            } => QmcError::Boundary {
                index,
                coordinate,
                value,
            },
            QmcError::Weight {
                step,
                name,
                message,
                ..
            } => QmcError::Weight {
                index,
                step,
                name,
                message,
            },
            QmcError::Evaluation { message, .. } => QmcError::Evaluation { index, message },
            other => other,
        }
    }
}
