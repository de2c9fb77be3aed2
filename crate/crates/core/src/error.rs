use thiserror::Error;

/// Errors raised by the algebraic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("basis index {index} out of range for a space of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("duplicate basis name {0:?}")]
    DuplicateBasisName(String),

    #[error("unknown basis name {0:?}")]
    UnknownBasisName(String),

    #[error("degree violation: {0}")]
    Degree(String),

    #[error("sign context has {context} letters but the partition covers {partition}")]
    LengthMismatch { context: usize, partition: usize },

    #[error("a partition of the empty word is not defined")]
    EmptyWord,

    #[error("series does not terminate: {0}")]
    NonTruncating(String),

    #[error("coalgebra mismatch: {0}")]
    KindMismatch(String),

    #[error("Maurer-Cartan condition fails: {0}")]
    NotMaurerCartan(String),

    #[error("sign convention check failed: {0}")]
    SignConvention(String),

    #[error("linear system is inconsistent at {0}")]
    Obstruction(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
