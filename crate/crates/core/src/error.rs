use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("elements have mixed degrees ({0} and {1})")]
    MixedDegrees(u32, u32),

    #[error("duplicate letter `{0}` in multilinear component")]
    DuplicateLetter(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("degree mismatch for `{name}`: differential has degree {got}, expected {expected}")]
    DegreeMismatch { name: String, expected: u32, got: u32 },

    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },

    #[error("d^2 is not verified: d(d({0})) != 0")]
    Unverified(String),

    #[error("target is not a cycle")]
    NotACycle,

    #[error("substitution is not invertible: {0}")]
    NonInvertible(String),

    #[error("ideal is not stable under the differential: d({0}) leaves the ideal")]
    NotDifferentialStable(String),

    #[error("missing filtration on generator `{0}`")]
    MissingFiltration(String),

    #[error("degree cap {cap} is too small: generators up to degree {needed} must be processed")]
    CapTooSmall { cap: u32, needed: u32 },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("budget exhausted during {stage}")]
    BudgetExhausted { stage: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
