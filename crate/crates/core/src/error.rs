use thiserror::Error;

/// Errors raised by the algebra, series and strategy layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live in different variable tables, an unknown variable was
    /// referenced, or a matrix had the wrong shape.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("semantic error at line {line}, column {column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Every coefficient vanished to the working truncation order.
    #[error("insufficient precision: {0}")]
    Precision(String),

    /// Every resultant or elimination step collapsed to zero.
    #[error("degenerate elimination: {0}")]
    Degenerate(String),

    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
