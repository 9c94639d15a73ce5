use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input has no valuation")]
    ZeroInput,
    #[error("non-unit input: valuation {0}")]
    NonUnit(i64),
    #[error("vector has odd order {0}")]
    OddOrder(u64),
    #[error("vector has even order {0}")]
    EvenOrder(u64),
    #[error("order {0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("coordinate {index} has even scaled numerator")]
    EvenNumerator { index: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("prime must be odd and prime, got {0}")]
    BadPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient norm outside the basis span: {0}")]
    OutsideSpan(String),
    #[error("field order must be an odd prime power at most 1000, got {0}")]
    BadFieldOrder(u64),
    #[error("point precondition failed: {0}")]
    BadPoint(String),
    #[error("domain precondition failed: {0}")]
    BadDomain(String),
    #[error("cover is not nice: {0}")]
    NotNice(String),
    #[error("bound violated at step {step}: {detail}")]
    BoundViolation { step: usize, detail: String },
    #[error("truncation window saturated")]
    WindowSaturated,
    #[error("input outside the convergence radius: {0}")]
    OutsideRadius(String),
    #[error("determinant is not 1 to precision")]
    NonUnitDeterminant,
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid field profile: {0}")]
    InvalidProfile(String),
    #[error("iteration did not reach the target precision within {0} steps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
