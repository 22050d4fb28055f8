use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum KzError {
    #[error("cycle coefficients sum to {0}, not zero; the class is not absolute")]
    NonAbsoluteCycle(String),
    #[error("degenerate angle: r/k = {r}/{k} is an integer")]
    DegenerateAngle { r: i64, k: i64 },
    #[error("vertex not found in diagram: {0}")]
    VertexNotFound(String),
    #[error("invalid index {index} for d = {d}")]
    InvalidIndex { index: i64, d: usize },
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("exact computation requested for inexact input: {0}")]
    InexactInput(String),
    #[error("numerical overflow: {0}")]
    NumericalOverflow(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unsupported format {format:?} for {what}")]
    UnsupportedFormat { format: String, what: String },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization failure: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, KzError>;
