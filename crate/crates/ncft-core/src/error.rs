use thiserror::Error;

/// Errors surfaced by the core library.
#[derive(Debug, Error)]
pub enum NcftError {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("unsupported family for catalog irreps: {0}")]
    UnsupportedFamily(String),
    #[error("regular representation decomposition stalled: {0}")]
    DecompositionStalled(String),
    #[error("invalid tolerance: {0}")]
    ToleranceInvalid(f64),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported value space: {0}")]
    UnsupportedSpace(String),
    #[error("non-finite entries in input matrix")]
    NonFiniteEntries,
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, NcftError>;
