use thiserror::Error;

/// Errors raised by the lab's numerical and geometric routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("no projection rule for this set: {0}")]
    UnsupportedSet(String),
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("step {n} is degenerate (consecutive terms coincide)")]
    DegenerateStep { n: usize },
    #[error("unknown example id `{0}`")]
    UnknownExample(String),
    #[error("sample set is empty")]
    EmptySample,
    #[error("term {n} coincides with the reference point")]
    DivideByZero { n: usize },
    #[error("preconditions failed: {}", .failed.join(", "))]
    PreconditionFailed { failed: Vec<String> },
    #[error("no cluster points detected")]
    NoClusters,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical self-check failed: {0}")]
    NumericalCheck(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
