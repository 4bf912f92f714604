use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SequenceError {
    #[error("sequence coefficient must be a nonzero finite complex number")]
    ZeroCoefficient,
    #[error("sequence base must be a nonzero finite complex number")]
    ZeroBase,
    #[error("sequence power must be finite, got {0}")]
    NonFinitePower(f64),
    #[error("override at index {0} must be a nonzero finite complex number")]
    ZeroOverride(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TridiagError {
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("truncation must be at least {min}, got {got}")]
    TruncationTooSmall { min: usize, got: usize },
    #[error("input of length {len} does not fit truncation {truncation}")]
    InputTooLong { len: usize, truncation: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix Q is not unitary: max |QQ* - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    #[error("raw generator tables are required for this operation")]
    MissingRawTables,
}

pub type Result<T, E = TridiagError> = std::result::Result<T, E>;
