use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value {value} at grid index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("grid mismatch: fields live on different grids")]
    GridMismatch,

    #[error("unsupported derivative order {0} (expected 1, 2 or 3)")]
    DerivativeOrder(u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid solver configuration: {0}")]
    InvalidSolverConfig(String),

    #[error(
        "initial data does not decay at the box edge: |u(±L)| = {edge:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    DecayViolation { edge: f64, tolerance: f64 },

    #[error("inadmissible solitary-wave parameters: {0}")]
    Inadmissible(String),

    #[error(
        "grid too narrow for the solitary profile: phi(L) = {edge:.3e} > {tolerance:.3e}; need L >= {required_half_width:.3}"
    )]
    GridTooNarrow {
        edge: f64,
        tolerance: f64,
        required_half_width: f64,
    },

    #[error("gamma = 0: no blow-up criterion applies, all solutions are global")]
    GammaZero,

    #[error("runs are incomparable: {0}")]
    Incomparable(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
