use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid box on axis {axis}: need 0 <= lo < hi <= 1, got ({lo}, {hi})")]
    InvalidBox { axis: usize, lo: f64, hi: f64 },

    #[error("invalid point: coordinate {axis} = {value} is outside [0, 1]")]
    CoordinateOutOfRange { axis: usize, value: f64 },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error(
        "exact search refused: dimension {dim} exceeds the cap {cap} \
         (cost grows like m^(2d)); use estimate_dispersion instead"
    )]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("set index {index} out of range for a family of {len} sets")]
    SetIndexOutOfRange { index: usize, len: usize },

    #[error("set {set} contains element {element}, but the ground set has size {ground_size}")]
    ElementOutOfRange {
        set: usize,
        element: usize,
        ground_size: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration refused: {count} items exceed the cap {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("point file line {line}: {message}")]
    PointFile { line: usize, message: String },

    #[error("family file: {0}")]
    FamilyFile(String),

    #[error(
        "internal error: the point set hits every test box but the extracted family \
         is refuted at r = {r} (j = {j}, A = {cover:?})"
    )]
    Claim2Violated { r: usize, j: usize, cover: Vec<usize> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
