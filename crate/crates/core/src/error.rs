use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("generator x{index} out of range 1..={max}")]
    GeneratorOutOfRange { index: u32, max: u32 },

    #[error("context mismatch: ({q1},{c1}) vs ({q2},{c2})")]
    ContextMismatch { q1: u32, c1: u32, q2: u32, c2: u32 },

    #[error("truncation degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),

    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("matrix dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("constant term is not 1; series has no unit inverse")]
    NotAUnit,

    #[error("matrix is not unitriangular: {0}")]
    NotUnitriangular(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires rational coefficients, got {0}")]
    RationalRequired(String),

    #[error("commutator weight {weight} exceeds truncation degree {degree}")]
    WeightExceedsDegree { weight: u32, degree: u32 },

    #[error("the trivial word has no residual witness")]
    TrivialWord,

    #[error("group-law fit failed at coordinate {coordinate}: {msg}")]
    FitFailed { coordinate: usize, msg: String },

    #[error("coordinate vector has length {got}, expected {expected}")]
    CoordinateLength { got: usize, expected: usize },

    #[error("computation exceeds the configured size limit: {0}")]
    ResourceLimit(String),

    #[error("invalid serialized value: {0}")]
    Deserialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
