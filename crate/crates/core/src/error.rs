use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid quaternion dimension {0}: must be at least 1 and 4n must fit in usize")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not orthogonal: max |O^T O - I| = {deviation:e}")]
    NotOrthogonal { deviation: f64 },

    #[error("adapted frame construction failed after {retries} degenerate draws")]
    FrameConstruction { retries: usize },

    #[error("degenerate plane: Gram determinant {gram:e} below threshold")]
    DegeneratePlane { gram: f64 },

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("curvature must be finite, got {0}")]
    NonFiniteCurvature(f64),

    #[error("{name} must be nonnegative, got {value}")]
    NegativeInput { name: &'static str, value: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is off the sphere: |p| = {norm}, radius {radius}")]
    OffSphere { norm: f64, radius: f64 },

    #[error("vector is not tangent at the base point: <X, p> = {dot:e}")]
    NotTangent { dot: f64 },

    #[error("vanishing Rayleigh denominator")]
    VanishingDenominator,
}

pub type Result<T> = std::result::Result<T, Error>;
