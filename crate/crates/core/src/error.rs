use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("coordinate index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("usage error: {0}")]
    UsageError(String),
    #[error("mixed momentum parity: degrees {0:?} are not all of one parity")]
    MixedParity(Vec<usize>),
    #[error("not a symmetry: {0}")]
    NotASymmetry(String),
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("invalid decomposition at grade {grade}: {detail}")]
    DecompositionInvalid { grade: usize, detail: String },
    #[error("sampling failure: {0}")]
    SamplingFailure(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("relation error: {0}")]
    Relation(String),
}
