use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum CaError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Parse failure in one of the text formats, with 1-based position.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A node or wall-clock budget ran out. Carries the progress made up to
    /// that point so callers can report partial work instead of silently
    /// truncating.
    #[error("budget exhausted after {nodes} nodes and {elapsed_ms} ms ({results} results so far)")]
    BudgetExhausted {
        nodes: u64,
        results: usize,
        elapsed_ms: u64,
    },

    /// The search was asked to run without a complete library for every
    /// required row count.
    #[error("missing libraries for row counts {missing:?}")]
    MissingLibraries { missing: Vec<usize> },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CaError>;

impl CaError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CaError::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        CaError::Parse {
            line,
            column,
            message: msg.into(),
        }
    }
}
