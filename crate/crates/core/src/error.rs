use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid degree sequence: {0}")]
    InvalidDegrees(String),

    #[error("total degree {0} is odd; half-edges cannot be perfectly paired")]
    OddTotalDegree(u64),

    #[error("side totals differ: {first_side} sums to {first}, {second_side} sums to {second}")]
    UnbalancedSides {
        first_side: &'static str,
        first: u64,
        second_side: &'static str,
        second: u64,
    },

    #[error("instance too large for exhaustive enumeration: total degree {total} exceeds cap {cap}")]
    TooLarge { total: u64, cap: u64 },

    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),

    #[error("invalid power-law spec: {0}")]
    InvalidSpec(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("expected {expected} model, got {found}")]
    FlavorMismatch {
        expected: &'static str,
        found: &'static str,
    },
}
