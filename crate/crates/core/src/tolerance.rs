use serde::{Deserialize, Serialize};

/// Tolerances shared by every check in the crate.
///
/// Every verdict produced downstream records the config it was computed
/// with, so a report can be re-checked without re-running the geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Allowed `| |p| - 1 |` for points on the unit sphere.
    pub unit_norm: f64,
    /// Allowed inner product for vectors that must be orthogonal.
    pub orthogonality: f64,
    /// Curvatures below this cut the osculating order.
    pub rank_truncation: f64,
    /// Residual norms below this count as zero in verdicts.
    pub residual: f64,
    /// Max-abs distance to a complex-torsion pattern.
    pub classification: f64,
    /// Tension coefficients at or below this are treated as minimal.
    pub minimality: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            unit_norm: 1e-10,
            orthogonality: 1e-10,
            rank_truncation: 1e-7,
            residual: 1e-8,
            classification: 1e-6,
            minimality: 1e-9,
        }
    }
}

impl ToleranceConfig {
    /// Same tolerance for every check (the CLI `--tol` flag).
    pub fn uniform(tol: f64) -> Self {
        Self {
            unit_norm: tol,
            orthogonality: tol,
            rank_truncation: tol,
            residual: tol,
            classification: tol,
            minimality: tol,
        }
    }
}
