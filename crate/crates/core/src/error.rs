//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the simulator, models, data pipeline, training, and
/// evaluation code.
#[derive(Debug, Error)]
pub enum Error {
    /// A count (qubits, samples, dimensions) is outside the supported range.
    #[error("size error: {0}")]
    Size(String),
    /// Array or batch dimensions do not match.
    #[error("shape error: {0}")]
    Shape(String),
    /// A qubit, parameter, or feature index is out of range.
    #[error("index error: {0}")]
    Index(String),
    /// Non-finite value where a finite one is required.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An input file does not match the expected schema.
    #[error("schema error: {0}")]
    Schema(String),
    /// A malformed record or cell in an input file.
    #[error("parse error: {0}")]
    Parse(String),
    /// A feature with max == min encountered while fitting normalization stats.
    #[error("degenerate feature {0:?}: max equals min while fitting normalization stats")]
    DegenerateFeature(String),
    /// Invalid experiment or training configuration.
    #[error("config error: {0}")]
    Config(String),
    /// Training diverged or could not complete.
    #[error("training error: {0}")]
    Training(String),
    /// Evaluation inputs are incompatible with each other or a checkpoint.
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
