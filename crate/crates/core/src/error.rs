use thiserror::Error;

/// Errors produced by pattern construction, the oracles, and the searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input text or grid does not describe a square pattern.
    #[error("malformed input at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a size guard (order cap, enumeration guard, ...).
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A structural statement that must hold for normal patterns failed.
    #[error("counterexample: {0}")]
    Counterexample(String),
}

impl Error {
    pub(crate) fn malformed(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn capacity(message: impl Into<String>) -> Self {
        Error::Capacity(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
