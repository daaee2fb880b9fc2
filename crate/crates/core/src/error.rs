use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} did not converge within {iterations} iterations")]
    ConvergenceFailure { what: &'static str, iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("degenerate interpolation angle (sin = {sin_angle:e}); endpoints are antipodal or zero")]
    DegenerateAngle { sin_angle: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("missing attribute group: {0}")]
    MissingGroup(String),

    #[error("training diverged at step {step}: non-finite {which} loss")]
    DivergenceDetected { step: usize, which: &'static str },

    #[error("checkpoint missing: {0}")]
    CheckpointMissing(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
