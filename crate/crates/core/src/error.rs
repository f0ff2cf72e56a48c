use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A value does not satisfy the invariants of its type (bad normal form,
    /// broken group table, non-Hermitian state, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// An enumeration or matrix would exceed the configured budget.
    #[error("budget exceeded: {what} has cardinality {size} > budget {budget}")]
    Budget { what: String, size: String, budget: usize },

    /// The operation has no implementation for this kind of group.
    #[error("unsupported group spec for {op}: {spec}")]
    Unsupported { op: &'static str, spec: String },

    /// Group-spec grammar error, annotated with a byte position.
    #[error("parse error at position {pos}: {message}\n  {input}\n  {caret}")]
    Parse {
        pos: usize,
        message: String,
        input: String,
        caret: String,
    },

    #[error("operands live in different groups: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, size: impl ToString, budget: usize) -> Self {
        Error::Budget {
            what: what.into(),
            size: size.to_string(),
            budget,
        }
    }

    pub(crate) fn parse(input: &str, pos: usize, message: impl Into<String>) -> Self {
        let caret = format!("{}^", " ".repeat(input[..pos.min(input.len())].chars().count()));
        Error::Parse {
            pos,
            message: message.into(),
            input: input.to_string(),
            caret,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
