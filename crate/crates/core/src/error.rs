//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration field failed validation; `field` names the offending key.
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    /// Dataset files or contents could not be used.
    #[error("dataset error: {0}")]
    Data(String),

    /// Checkpoint could not be written, read, or verified.
    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    /// Text encoding failed for a specific prompt.
    #[error("text encoding failed for pair ({primary}, {secondary}): {message}")]
    TextEncoding {
        primary: usize,
        secondary: usize,
        message: String,
    },

    /// Training produced a non-finite loss and the epoch was aborted.
    #[error("training aborted at epoch {epoch}, step {step}: {details}")]
    TrainingAborted {
        epoch: usize,
        step: usize,
        details: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True when the error stems from bad user input rather than a runtime
    /// failure; the CLI maps this to exit code 2.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_) | Error::Config { .. } | Error::Data(_)
        )
    }
}
