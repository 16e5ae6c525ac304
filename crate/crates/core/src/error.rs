use std::io;

use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error)]
pub enum LabError {
    /// An allocation would exceed the configured memory budget.
    #[error("{what} needs {required} bytes but the memory budget allows {allowed} bytes")]
    Capacity {
        what: &'static str,
        required: u64,
        allowed: u64,
    },

    /// An index or argument lies outside what a table covers.
    #[error("{what} = {value} is out of range (limit {limit})")]
    Range {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// A real-valued argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Experiment configuration rejected.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Malformed table container.
    #[error("bad table file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl LabError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        LabError::Domain(msg.into())
    }

    pub(crate) fn range(what: &'static str, value: u64, limit: u64) -> Self {
        LabError::Range { what, value, limit }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
