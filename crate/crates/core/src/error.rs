use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("non-finite entry")]
    NonFinite,

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A hypothesis required by a formula does not hold for the given input.
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("not an immersion at {point:?}: tangent frame sigma_min = {sigma_min:e}")]
    NotImmersed { point: Vec<f64>, sigma_min: f64 },

    #[error("no admissible pairs: exclusion radius {delta} removes every sampled pair")]
    EmptyPairSet { delta: f64 },

    #[error("bilinear map is not symmetric: B(x,y) != B(y,x) for x={x:?}, y={y:?}")]
    Asymmetric { x: Vec<f64>, y: Vec<f64> },

    #[error("coefficient tensor is not a convolution map: {0}")]
    NotConvolution(String),

    #[error("cannot certify: sampled nonsingularity margin {margin:e} is not above {threshold:e}")]
    NotCertified { margin: f64, threshold: f64 },

    #[error("images intersect at sampled pair s={s:?}, t={t:?}")]
    ImagesIntersect { s: Vec<f64>, t: Vec<f64> },

    #[error("unknown embedding: {0}")]
    UnknownEmbedding(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
