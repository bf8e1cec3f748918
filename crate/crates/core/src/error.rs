use thiserror::Error;

/// Errors raised by field, geometry, code and search operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {order} exceeds cap {cap}")]
    FieldTooLarge { order: u64, cap: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension k = {0} is below 2")]
    DimensionTooSmall(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("elements or points come from different structures")]
    Mismatch,
    #[error("projective system is not spanning (support lies in a hyperplane)")]
    NotSpanning,
    #[error("degenerate coordinate: column {0} is zero")]
    ZeroColumn(usize),
    #[error("rank {rank} is below the row count {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("points are not in general position")]
    NotGeneralPosition,
    #[error("budget exceeded: {required} required, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("spectrum routes disagree: {0}")]
    RouteMismatch(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
