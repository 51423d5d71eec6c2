use thiserror::Error;

/// Errors raised by the constructions, searches and certifiers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("value {value} out of range at cell {index}")]
    ValueOutOfRange { index: usize, value: i32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A search hit its node cap before it could finish. This is never a
    /// verdict in either direction.
    #[error("resource limit reached after {nodes} search nodes")]
    ResourceLimit { nodes: u64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// Partial data that is not the restriction of any cube with the
    /// requested parameters.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("no completion exists")]
    NoCompletion,

    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
