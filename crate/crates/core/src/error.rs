use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate tx/rx pair: separation {separation:e} m is below 1e-9 m")]
    DegeneratePair { separation: f64 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("raster of {cells} cells exceeds the limit of {limit}")]
    RasterTooLarge { cells: u128, limit: u128 },

    #[error("sampling region is empty")]
    EmptyRegion,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite network input")]
    NonFiniteInput,

    #[error("empty batch")]
    EmptyBatch,

    #[error("training diverged at step {step}: total loss is not finite")]
    DivergenceDetected { step: usize },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegeneratePair { .. } => "DegeneratePair",
            Error::Schema(_) => "SchemaError",
            Error::UnknownMaterial(_) => "UnknownMaterial",
            Error::InvalidGeometry(_) => "InvalidGeometry",
            Error::RasterTooLarge { .. } => "RasterTooLarge",
            Error::EmptyRegion => "EmptyRegion",
            Error::Parse { .. } => "ParseError",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::NonFiniteInput => "NonFiniteInput",
            Error::EmptyBatch => "EmptyBatch",
            Error::DivergenceDetected { .. } => "DivergenceDetected",
            Error::Checkpoint(_) => "CheckpointError",
            Error::Io { .. } => "IoError",
        }
    }
}
