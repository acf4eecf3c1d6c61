use thiserror::Error;

/// Errors raised by the geometric routines.
///
/// Variants that carry a number report the measured defect, so callers can
/// compare it against the tolerance that rejected the input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("ambient vectors need an even number (>= 4) of coordinates, got {0}")]
    BadLength(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("point is not on the unit sphere (|p| - 1 = {defect:e})")]
    NotUnit { defect: f64 },

    #[error("vector is not tangent to the sphere (<v, p> = {defect:e})")]
    NotTangent { defect: f64 },

    #[error("curve is not horizontal (<E1, xi> = {defect:e})")]
    NotHorizontal { defect: f64 },

    #[error("curve is not parametrized by arc length ({0})")]
    NotArcLength(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no real solution (discriminant = {discriminant:e})")]
    NoSolution { discriminant: f64 },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("classification error: {0}")]
    Classification(String),

    #[error("unsupported osculating order {order} (k4 = {k4:e})")]
    UnsupportedOrder { order: usize, k4: f64 },

    #[error("structural error: {0}")]
    Structure(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
