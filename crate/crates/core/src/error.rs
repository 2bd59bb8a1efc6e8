use thiserror::Error;

/// Errors produced by the workbench.
///
/// `CapExceeded` and `BudgetExceeded` mean the question was well posed but too
/// large for the configured limits; everything else is an input problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: u64 },

    #[error("budget of {budget} exhausted after {spent} candidates")]
    BudgetExceeded { budget: u64, spent: u64 },

    #[error("{element} is not an element of {group}")]
    NotInGroup { element: String, group: String },

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("no alpha value supplied for window word `{0}`")]
    MissingAlpha(String),

    #[error("unassigned symbol `{0}`")]
    UnassignedSymbol(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Shift a parse error reported against a single line onto its position in a file.
    pub fn at_line(self, line: usize, column_offset: usize) -> Self {
        match self {
            Error::Parse {
                column, message, ..
            } => Error::Parse {
                line,
                column: column + column_offset,
                message,
            },
            other => other,
        }
    }

    /// True for the limit errors (cap or budget), as opposed to input errors.
    pub fn is_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::BudgetExceeded { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
