use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent overflow (exponents are capped at 2^31-1)")]
    ExponentOverflow,
    #[error("b must be nonzero")]
    ZeroB,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("complex is not reduced: {0}")]
    NotReduced(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("slide budget exceeded")]
    SlideBudget,
    #[error("n must be at least 1")]
    ShiftIndex,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }

    /// True for errors caused by malformed text rather than bad mathematics.
    pub fn is_syntax(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::ExponentOverflow)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
