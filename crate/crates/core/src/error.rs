use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no exact representation for {op} of {left} and {right}")]
    UnsupportedRepresentationPair { op: &'static str, left: &'static str, right: &'static str },

    #[error("polytopes are supported for dimensions 1 to 3, got {0}")]
    UnsupportedDimension(usize),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid direction grid: {0}")]
    InvalidGrid(String),

    #[error("embedded elements live on different direction grids")]
    GridMismatch,

    #[error("evaluation index {index} out of range for grid of size {m}")]
    InvalidEvaluation { index: usize, m: usize },

    #[error("a support-like witness exists but the difference cannot be reconstructed for {0}")]
    ReconstructionUnavailable(&'static str),

    #[error("sample count must be at least one")]
    NSamplesZero,

    #[error("containment and embedded-order events disagree on {count} draws")]
    EquivalenceViolation { count: usize },

    #[error("rate parameter must be positive and finite, got {0}")]
    NonPositiveLambda(f64),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("time grid is empty")]
    EmptyTimeGrid,

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("need at least {required} paths, got {available}")]
    TooFewPaths { required: usize, available: usize },

    #[error("moment estimate unstable: standard error {stderr} exceeds 25% of theoretical value {theoretical}")]
    UnstableMoment { stderr: f64, theoretical: f64 },

    #[error("partition time {0} is not a time of the sampled path")]
    PartitionOutOfRange(f64),

    #[error("integrand value at step {step} depends on time index {depends_on}")]
    NonAdaptedIntegrand { step: usize, depends_on: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
