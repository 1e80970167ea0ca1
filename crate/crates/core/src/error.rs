use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in the prime field")]
    DivisionByZero,

    #[error("invalid modulus {0}: {1}")]
    InvalidModulus(u64, &'static str),

    /// Operands that live in different rings or have incompatible shapes.
    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("exponent overflow")]
    ExponentOverflow,

    /// A Gröbner or minor-enumeration resource limit was hit. The computation
    /// is abandoned rather than returning a partial answer.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The point handed to a pointwise analysis is not a regular point of S.
    #[error("point classification failed: {0}")]
    Classification(String),

    #[error("retry budget exhausted: {0}")]
    RetriesExhausted(String),

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget(_))
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
