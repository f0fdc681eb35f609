use thiserror::Error;

/// Errors raised by network construction, evaluation and statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("schedule refers to unknown landscape {id} ({available} available)")]
    UnknownLandscape { id: usize, available: usize },

    #[error("trait node {node} is outside [{lower}, {nodes})")]
    TraitNodeOutOfBounds {
        node: usize,
        lower: usize,
        nodes: usize,
    },

    #[error("exhaustive enumeration over {traits} traits exceeds the limit of {limit}")]
    TooLarge { traits: usize, limit: usize },

    #[error("inherit-final offspring require the parent's lifecycle result")]
    MissingParentResult,

    #[error("test statistic undefined: {0}")]
    Undefined(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}
