//! Closed forms for products in Clifford tori, the tangent sphere bundle,
//! Lagrangian flat tori in `CP^n`, and biharmonic hypersurface predicates.

use serde::Serialize;

use crate::ambient::AmbientVector;
use crate::error::{GeometryError, Result};
use crate::roots::{quadratic_roots, safeguarded_newton, sign_change_brackets};
use crate::tolerance::ToleranceConfig;

/// `M₁ × M₂ ⊂ S^{2p+1}(a) × S^{2q+1}(b) ⊂ S^{2n+1}`, `M_i` minimal in its
/// factor and of dimension `m_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductSphereConfig {
    pub p: usize,
    pub q: usize,
    pub a: f64,
    pub b: f64,
    pub m1: usize,
    pub m2: usize,
}

impl ProductSphereConfig {
    pub fn new(p: usize, q: usize, a: f64, b: f64, m1: usize, m2: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(GeometryError::Domain(format!("radii must be positive, got a = {a}, b = {b}")));
        }
        let defect = a * a + b * b - 1.0;
        if defect.abs() > 1e-12 {
            return Err(GeometryError::Domain(format!("a² + b² - 1 = {defect:e}")));
        }
        if m1 == 0 || m2 == 0 || m1 > 2 * p + 1 || m2 > 2 * q + 1 {
            return Err(GeometryError::Domain(format!(
                "need 1 <= m1 <= {} and 1 <= m2 <= {}, got m1 = {m1}, m2 = {m2}",
                2 * p + 1,
                2 * q + 1
            )));
        }
        Ok(Self { p, q, a, b, m1, m2 })
    }

    /// Config with `a² = t`, `b² = 1 - t`.
    pub fn from_a_sq(p: usize, q: usize, t: f64, m1: usize, m2: usize) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(GeometryError::Domain(format!("a² must lie in (0, 1), got {t}")));
        }
        Self::new(p, q, t.sqrt(), (1.0 - t).sqrt(), m1, m2)
    }
}

fn tension_bitension(a: f64, b: f64, m1: f64, m2: f64) -> (f64, f64) {
    let c = (a / b) * m2 - (b / a) * m1;
    let ratio = (b * b) / (a * a);
    (c, c * (m1 + m2 - ratio * m1 - m2 / ratio))
}

/// Coefficients of `τ` and `τ₂` on the unit normal `η` of the product.
pub fn clifford_tension_bitension(cfg: &ProductSphereConfig) -> Result<(f64, f64)> {
    if cfg.a == 0.0 || cfg.b == 0.0 {
        return Err(GeometryError::Domain("radii must be nonzero".into()));
    }
    Ok(tension_bitension(cfg.a, cfg.b, cfg.m1 as f64, cfg.m2 as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootStatus {
    Admissible,
    ExcludedMinimal,
    OutOfRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliffordRoot {
    pub a_sq: f64,
    pub status: RootStatus,
    pub tension: f64,
    /// `|(b²/a²) m₁ + (a²/b²) m₂ - 4 - m₁ - m₂|`.
    pub condition_residual: f64,
    /// `|(2m₁+2m₂+4) t² - (3m₁+m₂+4) t + m₁|`.
    pub quadratic_residual: f64,
}

/// Screens a candidate `t = a²` for the `(-4)` condition.
pub fn screen_candidate(m1: usize, m2: usize, t: f64, tol: &ToleranceConfig) -> CliffordRoot {
    let (m1f, m2f) = (m1 as f64, m2 as f64);
    let quadratic_residual =
        ((2.0 * m1f + 2.0 * m2f + 4.0) * t * t - (3.0 * m1f + m2f + 4.0) * t + m1f).abs();
    if !(t > 0.0 && t < 1.0) {
        return CliffordRoot {
            a_sq: t,
            status: RootStatus::OutOfRange,
            tension: f64::NAN,
            condition_residual: f64::NAN,
            quadratic_residual,
        };
    }
    let (a, b) = (t.sqrt(), (1.0 - t).sqrt());
    let (tension, _) = tension_bitension(a, b, m1f, m2f);
    let s = 1.0 - t;
    let condition_residual = (s / t * m1f + t / s * m2f - 4.0 - m1f - m2f).abs();
    let status = if tension.abs() <= tol.minimality {
        RootStatus::ExcludedMinimal
    } else {
        RootStatus::Admissible
    };
    CliffordRoot {
        a_sq: t,
        status,
        tension,
        condition_residual,
        quadratic_residual,
    }
}

/// All roots of the `(-4)` condition in `t = a²`, each screened.
///
/// Clearing denominators in `(b²/a²) m₁ + (a²/b²) m₂ = 4 + m₁ + m₂` with
/// `b² = 1 - t` gives `(2m₁+2m₂+4) t² - (3m₁+m₂+4) t + m₁ = 0`.
pub fn clifford_minus4_candidates(m1: usize, m2: usize, tol: &ToleranceConfig) -> Result<Vec<CliffordRoot>> {
    if m1 == 0 || m2 == 0 {
        return Err(GeometryError::Domain(format!("need m1, m2 >= 1, got {m1}, {m2}")));
    }
    let (m1f, m2f) = (m1 as f64, m2 as f64);
    Ok(quadratic_roots(2.0 * m1f + 2.0 * m2f + 4.0, -(3.0 * m1f + m2f + 4.0), m1f)
        .into_iter()
        .map(|t| screen_candidate(m1, m2, t, tol))
        .collect())
}

/// Admissible roots only, ascending.
pub fn clifford_minus4_solve(m1: usize, m2: usize, tol: &ToleranceConfig) -> Result<Vec<CliffordRoot>> {
    Ok(clifford_minus4_candidates(m1, m2, tol)?
        .into_iter()
        .filter(|r| r.status == RootStatus::Admissible)
        .collect())
}

/// Tangent sphere bundle `M = T^b S^{2p+1}(a) ⊂ S^{4p+3}`, `a² + b² = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereBundleAnalysis {
    pub p: usize,
    pub a_sq: f64,
    /// `H = c η₂` with `c = (2p/(4p+1)) (a² - b²)/a²`; `|η₂| = a/b`.
    pub mean_curvature_coefficient: f64,
    /// `c` recomputed by tracing the second fundamental form over a frame.
    pub frame_trace_coefficient: f64,
    /// `-1 - 2p(a²/b² + b²/a²) + 4p + 1`.
    pub biharmonic_bracket: f64,
    pub minus4_bracket: f64,
    /// `|τ| = (4p+1) |c| a/b`.
    pub tension_norm: f64,
    pub bitension_norm: f64,
    /// `|τ₂ + 4τ|`.
    pub minus4_residual: f64,
    /// Norm a biharmonic `π(M)` would need to vanish: both brackets must be
    /// zero at different points of `M`.
    pub projection_residual: f64,
    pub minimal_in_clifford_torus: bool,
    pub minimal_in_sphere: bool,
    pub proper_biharmonic_in_sphere: bool,
    pub minus4_biharmonic: bool,
    pub projection_proper_biharmonic: bool,
}

/// Mean curvature of the bundle from tracing
/// `B(Z, Z) = -2<X, Y> η₁ - (b²/a²)(|X|² - (a²/b²)|Y|²) η₂` over the
/// orthonormalized frame `{y₀^H, y_k^H, y_k^V}` at a concrete point.
///
/// Returns the `(η₁, η₂)` coefficients of the mean curvature.
pub fn sphere_bundle_frame_trace(p: usize, a_sq: f64) -> Result<(f64, f64)> {
    if p == 0 {
        return Err(GeometryError::Domain("p must be at least 1".into()));
    }
    if !(a_sq > 0.0 && a_sq < 1.0) {
        return Err(GeometryError::Domain(format!("a² must lie in (0, 1), got {a_sq}")));
    }
    let (a, b) = (a_sq.sqrt(), (1.0 - a_sq).sqrt());
    let b2a2 = (b * b) / (a * a);
    // point x₀ = a e₀, tangent basis y_k = b e_k (k = 1..2p+1), y₀ := y₁
    let dim = p; // R^{2p+2}
    let e = |k: usize| AmbientVector::basis(dim, k);
    let x0 = e(0).scaled(a);
    let y0 = e(1).scaled(b);
    let zero = AmbientVector::zeros(dim);

    let mut frame: Vec<(AmbientVector, AmbientVector)> = vec![(y0.clone(), x0.scaled(-b2a2))];
    for k in 2..=2 * p + 1 {
        frame.push((e(k).scaled(b), zero.clone()));
    }
    for k in 2..=2 * p + 1 {
        frame.push((zero.clone(), e(k).scaled(b)));
    }

    let mut trace = (0.0, 0.0);
    for (x, y) in &frame {
        // tangency to M at (x₀, y₀)
        let t = [x.dot(&x0), y.dot(&y0), x.dot(&y0) + x0.dot(y)];
        if t.iter().any(|v| v.abs() > 1e-12) {
            return Err(GeometryError::Structure("frame vector not tangent to the bundle".into()));
        }
        let len_sq = x.norm_sq() + y.norm_sq();
        trace.0 += -2.0 * x.dot(y) / len_sq;
        trace.1 += -b2a2 * (x.norm_sq() - y.norm_sq() / b2a2) / len_sq;
    }
    let m = (4 * p + 1) as f64;
    Ok((trace.0 / m, trace.1 / m))
}

pub fn sphere_bundle_analyze(p: usize, a_sq: f64, tol: &ToleranceConfig) -> Result<SphereBundleAnalysis> {
    let (_, frame_c) = sphere_bundle_frame_trace(p, a_sq)?;
    let b_sq = 1.0 - a_sq;
    let pf = p as f64;
    let m = 4.0 * pf + 1.0;
    let c = (2.0 * pf / m) * (a_sq - b_sq) / a_sq;
    let x = a_sq / b_sq;
    let biharmonic_bracket = -1.0 - 2.0 * pf * (x + 1.0 / x) + m;
    let minus4_bracket = biharmonic_bracket + 4.0;
    let tension_norm = m * c.abs() * (a_sq / b_sq).sqrt();
    let bitension_norm = tension_norm * biharmonic_bracket.abs();
    let minus4_residual = tension_norm * minus4_bracket.abs();
    // Where y₀ is a multiple of Ĵx₀ the Hopf relation for π(M) reduces to
    // the biharmonic bracket; where y₀ ⟂ Ĵx₀ it reduces to the (-4) one.
    let projection_residual = tension_norm * biharmonic_bracket.abs().max(minus4_bracket.abs());

    // Verdicts test the brackets rather than the norms: next to a = b the
    // tension is small enough to push any product under tolerance.
    let minimal_in_sphere = tension_norm <= tol.minimality;
    Ok(SphereBundleAnalysis {
        p,
        a_sq,
        mean_curvature_coefficient: c,
        frame_trace_coefficient: frame_c,
        biharmonic_bracket,
        minus4_bracket,
        tension_norm,
        bitension_norm,
        minus4_residual,
        projection_residual,
        minimal_in_clifford_torus: true,
        minimal_in_sphere,
        proper_biharmonic_in_sphere: !minimal_in_sphere && biharmonic_bracket.abs() <= tol.residual,
        minus4_biharmonic: !minimal_in_sphere && minus4_bracket.abs() <= tol.residual,
        projection_proper_biharmonic: !minimal_in_sphere
            && biharmonic_bracket.abs().max(minus4_bracket.abs()) <= tol.residual,
    })
}

/// `(2p+1 ± √(2p+1))/(4p+2)`, ascending.
pub fn sphere_bundle_minus4_roots(p: usize) -> [f64; 2] {
    let k = (2 * p + 1) as f64;
    [(k - k.sqrt()) / (2.0 * k), (k + k.sqrt()) / (2.0 * k)]
}

/// Flat torus `S¹(a₁) × ... × S¹(a_{n+1}) ⊂ S^{2n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagrangianTorusSpec {
    pub radii: Vec<f64>,
}

impl LagrangianTorusSpec {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.len() < 2 {
            return Err(GeometryError::Domain(format!("need at least 2 radii, got {}", radii.len())));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return Err(GeometryError::Domain(format!("radii must be positive, got {r}")));
        }
        let defect = radii.iter().map(|r| r * r).sum::<f64>() - 1.0;
        if defect.abs() > 1e-12 {
            return Err(GeometryError::Domain(format!("Σ a_k² - 1 = {defect:e}")));
        }
        Ok(Self { radii })
    }

    /// Spec from squared radii.
    pub fn from_squares(squares: &[f64]) -> Result<Self> {
        Self::new(squares.iter().map(|s| s.sqrt()).collect())
    }

    pub fn n(&self) -> usize {
        self.radii.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZhangResidual {
    pub residuals: Vec<f64>,
    pub norm: f64,
    pub minimal: bool,
}

/// `r_k = d a_k - 1/a_k³ - (2/a_k)(n+3)((n+1)a_k² - 1)`, `d = Σ 1/a_j²`.
pub fn zhang_residual(spec: &LagrangianTorusSpec, tol: &ToleranceConfig) -> ZhangResidual {
    let n = spec.n() as f64;
    let d: f64 = spec.radii.iter().map(|a| 1.0 / (a * a)).sum();
    let residuals: Vec<f64> = spec
        .radii
        .iter()
        .map(|&a| d * a - 1.0 / (a * a * a) - (2.0 / a) * (n + 3.0) * ((n + 1.0) * a * a - 1.0))
        .collect();
    let norm = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
    let minimal = spec
        .radii
        .iter()
        .all(|a| (a * a - 1.0 / (n + 1.0)).abs() <= tol.minimality);
    ZhangResidual {
        residuals,
        norm,
        minimal,
    }
}

/// Numerator of `a₁ r₁` under `a₂ = ... = a_{n+1}`, as a cubic in `u = a₁²`:
/// `2(n+1)(n+3) u³ + (n² - 1 - 2(n+2)(n+3)) u² + (2n+8) u - 1`.
fn two_block_cubic(n: f64) -> [f64; 4] {
    [
        2.0 * (n + 1.0) * (n + 3.0),
        n * n - 1.0 - 2.0 * (n + 2.0) * (n + 3.0),
        2.0 * n + 8.0,
        -1.0,
    ]
}

/// Solutions with one distinguished radius and the rest equal.
///
/// Since `Σ a_k r_k = 0` identically, the ansatz leaves the single equation
/// `r₁ = 0`. Its roots in `(0, 1)` are bracketed on a `10⁴`-cell grid,
/// refined by safeguarded Newton, and kept when the full residual is below
/// `1e-10` and the torus is not minimal.
pub fn zhang_solve_two_block(n: usize, tol: &ToleranceConfig) -> Result<Vec<LagrangianTorusSpec>> {
    if n < 2 {
        return Err(GeometryError::Domain(format!("two-block ansatz needs n >= 2, got {n}")));
    }
    let [c3, c2, c1, c0] = two_block_cubic(n as f64);
    let f = |u: f64| ((c3 * u + c2) * u + c1) * u + c0;
    let df = |u: f64| (3.0 * c3 * u + 2.0 * c2) * u + c1;
    let eps = 1e-12;
    let mut out = Vec::new();
    for (lo, hi) in sign_change_brackets(f, eps, 1.0 - eps, 10_000) {
        let Some(u) = safeguarded_newton(f, df, lo, hi, 1e-16, 200) else {
            continue;
        };
        let v = (1.0 - u) / n as f64;
        let mut squares = vec![v; n + 1];
        squares[0] = u;
        let Ok(spec) = LagrangianTorusSpec::from_squares(&squares) else {
            continue;
        };
        let r = zhang_residual(&spec, tol);
        if r.norm <= 1e-10 && !r.minimal {
            out.push(spec);
        }
    }
    Ok(out)
}

/// `|τ| = (Σ ((n+1)a_k - 1/a_k)²)^{1/2}`.
pub fn torus_tension_norm(spec: &LagrangianTorusSpec) -> f64 {
    let n1 = (spec.n() + 1) as f64;
    spec.radii.iter().map(|a| (n1 * a - 1.0 / a).powi(2)).sum::<f64>().sqrt()
}

/// `|τ₂ - λτ|` for the flat torus, assembled in coordinates at the base
/// point `x = Σ a_k η_k` from `B(X_k, X_k) = -η_k/a_k + x`, the shape
/// operator eigenvalues `<B(X_k, X_k), τ>` and `∇^⊥τ = 0`:
/// `τ₂ = -Σ μ_k B(X_k, X_k) + (n+1) τ`.
pub fn torus_extrinsic_oracle(spec: &LagrangianTorusSpec, lambda: f64) -> f64 {
    let n = spec.n();
    let eta: Vec<AmbientVector> = (0..=n).map(|k| AmbientVector::complex_axis(n, k)).collect();
    let mut x = AmbientVector::zeros(n);
    for (a, e) in spec.radii.iter().zip(&eta) {
        x.axpy(*a, e);
    }
    let b: Vec<AmbientVector> = spec
        .radii
        .iter()
        .zip(&eta)
        .map(|(a, e)| &x - &e.scaled(1.0 / a))
        .collect();
    let mut tau = AmbientVector::zeros(n);
    for bk in &b {
        tau += bk;
    }
    let mut tau2 = tau.scaled((n + 1) as f64);
    for bk in &b {
        tau2.axpy(-bk.dot(&tau), bk);
    }
    tau2.axpy(-lambda, &tau);
    tau2.norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypersurfaceData {
    pub n: usize,
    pub mean_curvature_sq: f64,
    pub second_ff_norm_sq: f64,
    pub c: f64,
    /// Dimension `m̄`; defaults to `2n - 1`.
    pub m_bar: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypersurfacePredicates {
    /// `|B̄|² - 2c(n+1)`.
    pub second_ff_defect: f64,
    pub proper_biharmonic: bool,
    /// `4n² - 2n - 4 + (2n-1)²|H̄|²`, reported for `c = 1` only.
    pub scalar_curvature: Option<f64>,
    pub m_bar: usize,
    /// `(m̄ + 3)/m̄`.
    pub tangent_bound: f64,
    pub within_tangent_bound: bool,
    pub within_normal_bound: bool,
    pub nonexistence_note: Option<String>,
}

/// Proper-biharmonic constant-mean-curvature hypersurfaces of the complex
/// space form of holomorphic curvature `4c` with `J̄H̄` tangent.
pub fn hypersurface_predicates(data: &HypersurfaceData, tol: &ToleranceConfig) -> Result<HypersurfacePredicates> {
    if data.n < 1 {
        return Err(GeometryError::Domain("n must be at least 1".into()));
    }
    for (name, v) in [
        ("|H|²", data.mean_curvature_sq),
        ("|B|²", data.second_ff_norm_sq),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(GeometryError::Domain(format!("{name} must be a nonnegative real, got {v}")));
        }
    }
    if !data.c.is_finite() {
        return Err(GeometryError::NonFinite("c"));
    }
    let n = data.n as f64;
    let m_bar = data.m_bar.unwrap_or(2 * data.n - 1);
    if m_bar == 0 {
        return Err(GeometryError::Domain("m̄ must be positive".into()));
    }
    let h2 = data.mean_curvature_sq;
    let second_ff_defect = data.second_ff_norm_sq - 2.0 * data.c * (n + 1.0);
    let tangent_bound = (m_bar as f64 + 3.0) / m_bar as f64;
    let scalar_curvature = ((data.c - 1.0).abs() <= tol.residual)
        .then(|| 4.0 * n * n - 2.0 * n - 4.0 + (2.0 * n - 1.0).powi(2) * h2);
    let nonexistence_note = (data.c <= 0.0).then(|| {
        format!(
            "c = {} <= 0: the constraint |B|² = 2c(n+1) <= 0 forces a totally geodesic, hence harmonic, \
             hypersurface; no proper-biharmonic examples exist",
            data.c
        )
    });
    Ok(HypersurfacePredicates {
        second_ff_defect,
        proper_biharmonic: second_ff_defect.abs() <= tol.residual && h2 > 0.0 && data.c > 0.0,
        scalar_curvature,
        m_bar,
        tangent_bound,
        within_tangent_bound: h2 > 0.0 && h2 <= tangent_bound,
        within_normal_bound: h2 > 0.0 && h2 <= 1.0,
        nonexistence_note,
    })
}
