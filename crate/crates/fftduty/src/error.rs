//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. The CLI maps variants onto its
//! stable exit codes, so the enum distinguishes bad *parameters* (caller
//! mistakes) from bad *data* (malformed or insufficient input) and from a
//! failed numerical cross-check.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The document as a whole is not in the expected format.
    #[error("format: {0}")]
    Format(String),

    /// A single data row could not be interpreted. `line` is 1-based and
    /// counts the header line.
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },

    /// Fewer usable points than the operation needs.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An argument outside its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A harmonic selection that does not fit the spectrum it is applied to.
    #[error("selection: {0}")]
    Selection(String),

    /// A numerical cross-check exceeded its tolerance.
    #[error("verification failed: {0}")]
    Verification(String),

    /// An error attributed to a named pipeline stage.
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps the error with the pipeline stage it occurred in.
    pub(crate) fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error, with any stage attribution unwrapped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
