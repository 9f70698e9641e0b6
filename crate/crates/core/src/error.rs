use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("need at least two curves")]
    TooFewCurves,

    #[error("need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("lag out of range: |{lag}| must be below n = {n}")]
    LagOutOfRange { lag: isize, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value at curve {row}, grid point {col}")]
    NonFinite { row: usize, col: usize },

    #[error("surface not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("degenerate covariance")]
    DegenerateCovariance,

    #[error("unit root: 1 - sum(phi) = {0:e}")]
    UnitRoot(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid interval: lower {lower} exceeds upper {upper}")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("length {len} not divisible by period {period} (remainder {})", len % period)]
    NotDivisible { len: usize, period: usize },

    #[error("row {row}: cannot parse {value:?} as a number")]
    Parse { row: usize, value: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable identifier used by the CLI's one-line error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySample => "empty_sample",
            Error::TooFewCurves => "too_few_curves",
            Error::TooShort { .. } => "too_short",
            Error::LagOutOfRange { .. } => "lag_out_of_range",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::NonFinite { .. } => "non_finite",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::DegenerateCovariance => "degenerate_covariance",
            Error::UnitRoot(_) => "unit_root",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidInterval { .. } => "invalid_interval",
            Error::NotDivisible { .. } => "not_divisible",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
