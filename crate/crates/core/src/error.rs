use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("vector is not integral")]
    NonIntegral,
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("wrong deformation type: {0}")]
    WrongType(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("reflection vector is isotropic")]
    Isotropic,
    #[error("degree overflow: product lands in degree {0} > 8")]
    DegreeOverflow(u32),
    #[error("projection failed: {0}")]
    Projection(String),
    #[error("line recovery failed: {0}")]
    Recovery(String),
    #[error("not realizable: {condition} fails ({detail})")]
    NotRealizable { condition: String, detail: String },
    #[error("inadmissible: {0}")]
    Inadmissible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
