//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Configuration file problems: parse failures, missing or duplicate
    /// sections, unknown versions.
    #[error("configuration error: {0}")]
    Config(String),

    /// A value violated a documented bound, named by field.
    #[error("validation error: {0}")]
    Validation(String),

    /// An argument outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// CSV or model-file schema mismatch.
    #[error("schema error: {0}")]
    Schema(String),

    /// Row-level parse failure, carries the 1-based row number.
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    /// Unknown categorical label.
    #[error("unknown label {0:?}; expected one of Fall, Spring, Summer, Winter")]
    UnknownLabel(String),

    /// Requested carrier frequency has no coefficient entry.
    #[error("unsupported frequency {0} GHz: no coefficient entry and interpolation is disabled")]
    UnsupportedFrequency(f64),

    /// Normal equations were singular and no regularization was requested.
    #[error("singular fit: {0}; consider ridge regression")]
    SingularFit(String),

    /// An iterative solver hit its cap without meeting tolerance.
    #[error("failed to converge after {iterations} iterations (last residual {residual:.3e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    /// Prediction input width differs from training width.
    #[error("shape error: expected {expected} features, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
