use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("oval time must be strictly negative, got t = {0}")]
    NonNegativeTime(f64),

    #[error("grid size {0} must be at least 16 and divisible by 4")]
    InvalidGrid(usize),

    #[error("ambient dimension must be at least 1, got {0}")]
    InvalidDimension(usize),

    #[error("horizontal coordinate {0} is outside the open strip |x| < pi/2")]
    OutsideStrip(f64),

    #[error("curvature array has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("curvature at node {index} is {value}; profile must be strictly convex")]
    NotConvex { index: usize, value: f64 },

    #[error("curvature array breaks the double reflection symmetry at node {index}")]
    NotSymmetric { index: usize },

    #[error("profile does not close: closure defect ({0:e}, {1:e})")]
    NonClosure(f64, f64),

    #[error("degenerate geometry: y = {y} at node {index}")]
    DegenerateGeometry { index: usize, y: f64 },

    #[error("reflection offset {alpha} must lie in (0, h) with h = {h}")]
    IllPosedReflection { alpha: f64, h: f64 },

    #[error("unstable step at t = {t}: curvature at node {index} became {value}")]
    Unstable { t: f64, index: usize, value: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("need at least {needed} snapshots, run has {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("extrapolated area slope {0} is not negative")]
    NonDecreasingArea(f64),

    #[error("profile is too narrow for the edge window: h = {h} < {required}")]
    InsufficientWidth { h: f64, required: f64 },

    #[error("run spans {span} on the extinction clock, need at least {required}")]
    SpanTooShort { span: f64, required: f64 },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
