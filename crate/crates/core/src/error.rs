use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A computation would exceed one of the configured size caps.
    #[error("size guard: {what} needs {needed}, cap is {cap}")]
    SizeGuard { what: &'static str, needed: String, cap: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("component index k={k} is outside 0..={n}")]
    BadK { k: usize, n: usize },

    #[error("linear system is inconsistent")]
    InconsistentSystem,

    /// Raised when a neutral rule fails to act as a scalar on a component.
    #[error("rule does not act as a scalar on component k={k}")]
    NotScalar { k: usize },

    #[error("weights `{name}` require m = 2, got m = {m}")]
    UnsupportedM { name: &'static str, m: usize },

    #[error("expected a vector of length {expected}, got {got}")]
    WrongSize { expected: usize, got: usize },

    #[error("infeasible paradox instance: {0}")]
    Infeasible(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}
