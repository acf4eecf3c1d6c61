//! Explicit biharmonic curve lifts, the order-4 holomorphic-helix solver and
//! the `CP²` helix classifier.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use crate::ambient::AmbientVector;
use crate::biharmonic::CurveInvariants;
use crate::curves::{CurvatureDerivatives, CurveFamily, CurveJet, JET_LEN};
use crate::error::{GeometryError, Result};
use crate::tolerance::ToleranceConfig;

/// One harmonic `cos(ωs) P + sin(ωs) Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm {
    pub omega: f64,
    pub cos_part: AmbientVector,
    pub sin_part: AmbientVector,
}

/// `γ(s) = C + Σ_j cos(ω_j s) P_j + sin(ω_j s) Q_j`, with jets in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigCurve {
    label: String,
    params: Vec<(String, f64)>,
    constant: AmbientVector,
    terms: Vec<TrigTerm>,
}

impl TrigCurve {
    pub fn new(
        label: impl Into<String>,
        params: Vec<(String, f64)>,
        constant: AmbientVector,
        terms: Vec<TrigTerm>,
    ) -> Result<Self> {
        for t in &terms {
            constant.check_same_dim(&t.cos_part)?;
            constant.check_same_dim(&t.sin_part)?;
            if !t.omega.is_finite() {
                return Err(GeometryError::NonFinite("frequency"));
            }
        }
        Ok(Self {
            label: label.into(),
            params,
            constant,
            terms,
        })
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn constant(&self) -> &AmbientVector {
        &self.constant
    }

    pub fn position(&self, s: f64) -> AmbientVector {
        self.derivative(s, 0)
    }

    fn derivative(&self, s: f64, k: usize) -> AmbientVector {
        let mut out = if k == 0 {
            self.constant.clone()
        } else {
            AmbientVector::zeros(self.constant.n())
        };
        let shift = k as f64 * FRAC_PI_2;
        for t in &self.terms {
            let scale = t.omega.powi(k as i32);
            let phase = t.omega * s + shift;
            out.axpy(scale * phase.cos(), &t.cos_part);
            out.axpy(scale * phase.sin(), &t.sin_part);
        }
        out
    }
}

impl CurveFamily for TrigCurve {
    fn jet(&self, s: f64) -> Result<CurveJet> {
        if !s.is_finite() {
            return Err(GeometryError::NonFinite("curve parameter"));
        }
        CurveJet::new(s, (0..JET_LEN).map(|k| self.derivative(s, k)).collect())
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn params(&self) -> Vec<(String, f64)> {
        self.params.clone()
    }

    fn n(&self) -> usize {
        self.constant.n()
    }
}

fn check_orthonormal(vectors: &[&AmbientVector], tol: &ToleranceConfig) -> Result<()> {
    for (i, u) in vectors.iter().enumerate() {
        let unit = u.norm() - 1.0;
        if unit.abs() > tol.unit_norm {
            return Err(GeometryError::Domain(format!("constant vector {} is not unit ({unit:e})", i + 1)));
        }
        for (j, v) in vectors.iter().enumerate().skip(i + 1) {
            let d = u.try_dot(v)?;
            if d.abs() > tol.orthogonality {
                return Err(GeometryError::Domain(format!(
                    "constant vectors {} and {} are not orthogonal ({d:e})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn require_n(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(GeometryError::Domain(format!("{what} needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// Horizontal lift of a holomorphic circle of curvature `k` in `CP^n`:
/// `r₁(cos(As) e₁ - sin(As) Ĵe₁) + r₂(cos(Bs) e₃ + sin(Bs) Ĵe₃)` with
/// `A = (k + √(k²+4))/2`, `B = 1/A`, `r₁² = 1/(1+A²)`, `r₂² = A²/(1+A²)`.
///
/// Upstairs it is a helix with `k₁ = k`, `k₂ = 1`, whose third frame vector
/// is vertical.
pub fn holomorphic_circle_lift(
    k: f64,
    e1: &AmbientVector,
    e3: &AmbientVector,
    tol: &ToleranceConfig,
) -> Result<TrigCurve> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(GeometryError::Domain(format!("circle curvature must be positive, got {k}")));
    }
    let a = 0.5 * (k + (k * k + 4.0).sqrt());
    let r1 = (1.0 / (1.0 + a * a)).sqrt();
    let r2 = a * r1;
    circle_lift_from_parts("holomorphic-circle", vec![("k".into(), k)], a, 1.0 / a, r1, r2, e1, e3, tol)
}

#[allow(clippy::too_many_arguments)]
fn circle_lift_from_parts(
    label: &str,
    params: Vec<(String, f64)>,
    a: f64,
    b: f64,
    r1: f64,
    r2: f64,
    e1: &AmbientVector,
    e3: &AmbientVector,
    tol: &ToleranceConfig,
) -> Result<TrigCurve> {
    let je1 = e1.j_apply();
    let je3 = e3.j_apply();
    check_orthonormal(&[e1, &je1, e3], tol)?;
    TrigCurve::new(
        label,
        params,
        AmbientVector::zeros(e1.n()),
        vec![
            TrigTerm {
                omega: a,
                cos_part: e1.scaled(r1),
                sin_part: je1.scaled(-r1),
            },
            TrigTerm {
                omega: b,
                cos_part: e3.scaled(r2),
                sin_part: je3.scaled(r2),
            },
        ],
    )
}

/// Lift of the biharmonic holomorphic circle (`k̄₁ = 2`) with the default
/// constant vectors `e₁ = ∂/∂x₁`, `e₃ = ∂/∂x₃` of `R^{2n+2}`.
pub fn lift_curve_tau12_pm1(n: usize) -> Result<TrigCurve> {
    require_n(n, 1, "the holomorphic circle lift")?;
    lift_curve_tau12_pm1_with(
        &AmbientVector::basis(n, 0),
        &AmbientVector::basis(n, 2),
        &ToleranceConfig::default(),
    )
}

/// As [`lift_curve_tau12_pm1`] with caller-chosen `e₁`, `e₃`; `e₃` must be
/// orthogonal to `e₁` and `Ĵe₁`.
pub fn lift_curve_tau12_pm1_with(
    e1: &AmbientVector,
    e3: &AmbientVector,
    tol: &ToleranceConfig,
) -> Result<TrigCurve> {
    let sqrt2 = std::f64::consts::SQRT_2;
    circle_lift_from_parts(
        "tau12-pm1",
        Vec::new(),
        sqrt2 + 1.0,
        sqrt2 - 1.0,
        (2.0 - sqrt2).sqrt() / 2.0,
        (2.0 + sqrt2).sqrt() / 2.0,
        e1,
        e3,
        tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tau12ZeroKind {
    Circle,
    Helix,
}

/// Lifts of the totally real biharmonic curves.
///
/// Circle: `(cos(√2 s) e₁ + sin(√2 s) e₂ + e₃)/√2`, needs `n >= 2`.
/// Helix: `(cos(ω₊s) e₁ + sin(ω₊s) e₂ + cos(ω₋s) e₃ + sin(ω₋s) e₄)/√2`
/// with `ω± = √(1 ± k₁)`, `k₁ ∈ (0, 1)`, needs `n >= 3`. The `e_i` are the
/// real directions of the first complex axes, so `{e_i, Ĵe_j}` is orthonormal.
pub fn lift_curve_tau12_zero(kind: Tau12ZeroKind, k1: f64, n: usize) -> Result<TrigCurve> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let e = |i: usize| AmbientVector::complex_axis(n, i);
    match kind {
        Tau12ZeroKind::Circle => {
            require_n(n, 2, "the totally real circle lift")?;
            let w = std::f64::consts::SQRT_2;
            TrigCurve::new(
                "tau12-zero-circle",
                Vec::new(),
                e(2).scaled(r),
                vec![TrigTerm {
                    omega: w,
                    cos_part: e(0).scaled(r),
                    sin_part: e(1).scaled(r),
                }],
            )
        }
        Tau12ZeroKind::Helix => {
            if !(k1 > 0.0 && k1 < 1.0) {
                return Err(GeometryError::Domain(format!("helix curvature must lie in (0, 1), got {k1}")));
            }
            require_n(n, 3, "the totally real helix lift")?;
            TrigCurve::new(
                "tau12-zero-helix",
                vec![("k1".into(), k1)],
                AmbientVector::zeros(n),
                vec![
                    TrigTerm {
                        omega: (1.0 + k1).sqrt(),
                        cos_part: e(0).scaled(r),
                        sin_part: e(1).scaled(r),
                    },
                    TrigTerm {
                        omega: (1.0 - k1).sqrt(),
                        cos_part: e(2).scaled(r),
                        sin_part: e(3).scaled(r),
                    },
                ],
            )
        }
    }
}

/// Great circle `cos(s) u + sin(s) v` through orthonormal `u`, `v`.
pub fn great_circle(u: &AmbientVector, v: &AmbientVector, tol: &ToleranceConfig) -> Result<TrigCurve> {
    check_orthonormal(&[u, v], tol)?;
    TrigCurve::new(
        "great-circle",
        Vec::new(),
        AmbientVector::zeros(u.n()),
        vec![TrigTerm {
            omega: 1.0,
            cos_part: u.clone(),
            sin_part: v.clone(),
        }],
    )
}

/// A horizontal great circle (a geodesic lift) in the first and second
/// complex axes.
pub fn horizontal_geodesic(n: usize) -> Result<TrigCurve> {
    require_n(n, 1, "a horizontal geodesic")?;
    great_circle(
        &AmbientVector::complex_axis(n, 0),
        &AmbientVector::complex_axis(n, 1),
        &ToleranceConfig::default(),
    )
}

/// Helix with constant curvatures `k₁, k₂ > 0` in `S³ ⊂ C²` (padded to
/// `S^{2n+1}`), realized as the torus knot `(r₁e^{iω₁s}, r₂e^{iω₂s})` with
/// `ω₁² + ω₂² = 1 + k₁² + k₂²`, `ω₁ω₂ = k₂` and `r₁²ω₁² + r₂²ω₂² = 1`.
pub fn sphere_helix(k1: f64, k2: f64, n: usize) -> Result<TrigCurve> {
    require_n(n, 1, "a sphere helix")?;
    if !(k1 > 0.0 && k2 > 0.0) || !k1.is_finite() || !k2.is_finite() {
        return Err(GeometryError::Domain(format!(
            "helix curvatures must be positive, got k1 = {k1}, k2 = {k2}"
        )));
    }
    let sum = 1.0 + k1 * k1 + k2 * k2;
    let root = (sum * sum - 4.0 * k2 * k2).sqrt();
    let (w1s, w2s) = ((sum + root) / 2.0, 2.0 * k2 * k2 / (sum + root));
    // ω₂² < 1 < ω₁² since the quadratic is -k₁² at 1
    let r1 = ((1.0 - w2s) / (w1s - w2s)).sqrt();
    let r2 = ((w1s - 1.0) / (w1s - w2s)).sqrt();
    let e = |k| AmbientVector::basis(n, k);
    TrigCurve::new(
        "sphere-helix",
        vec![("k1".into(), k1), ("k2".into(), k2)],
        AmbientVector::zeros(n),
        vec![
            TrigTerm {
                omega: w1s.sqrt(),
                cos_part: e(0).scaled(r1),
                sin_part: e(1).scaled(r1),
            },
            TrigTerm {
                omega: w2s.sqrt(),
                cos_part: e(2).scaled(r2),
                sin_part: e(3).scaled(r2),
            },
        ],
    )
}

/// One of the ten inner-product identities the constant vectors of the
/// `k̄₁ = 2` lift must satisfy at `s = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramCondition {
    pub label: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl GramCondition {
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Evaluates the ten identities for `γ = c₁cos(As) + c₂sin(As) + c₃cos(Bs)
/// + c₄sin(Bs)` obtained from the values of `<γ^(i), γ^(j)>` at `s = 0`,
/// where `c_ij = <c_i, c_j>`.
pub fn gram_conditions(curve: &TrigCurve) -> Result<Vec<GramCondition>> {
    let [t1, t2] = curve.terms() else {
        return Err(GeometryError::Structure("expected a two-frequency curve".into()));
    };
    if curve.constant().norm() != 0.0 {
        return Err(GeometryError::Structure("expected a curve without constant term".into()));
    }
    let (a, b) = (t1.omega, t2.omega);
    let c = [&t1.cos_part, &t1.sin_part, &t2.cos_part, &t2.sin_part];
    let g = |i: usize, j: usize| c[i - 1].dot(c[j - 1]);
    let cond = |label, lhs, rhs| GramCondition { label, lhs, rhs };
    Ok(vec![
        cond("<γ,γ> = 1", g(1, 1) + 2.0 * g(1, 3) + g(3, 3), 1.0),
        cond(
            "<γ',γ'> = 1",
            a * a * g(2, 2) + 2.0 * a * b * g(2, 4) + b * b * g(4, 4),
            1.0,
        ),
        cond(
            "<γ,γ'> = 0",
            a * g(1, 2) + a * g(2, 3) + b * g(1, 4) + b * g(3, 4),
            0.0,
        ),
        cond(
            "<γ',γ''> = 0",
            a.powi(3) * g(1, 2) + a * b * b * g(2, 3) + a * a * b * g(1, 4) + b.powi(3) * g(3, 4),
            0.0,
        ),
        cond(
            "<γ'',γ''> = 5",
            a.powi(4) * g(1, 1) + 2.0 * a * a * b * b * g(1, 3) + b.powi(4) * g(3, 3),
            5.0,
        ),
        cond(
            "-<γ,γ''> = 1",
            a * a * g(1, 1) + (a * a + b * b) * g(1, 3) + b * b * g(3, 3),
            1.0,
        ),
        cond(
            "-<γ',γ'''> = 5",
            a.powi(4) * g(2, 2) + (a * b.powi(3) + a.powi(3) * b) * g(2, 4) + b.powi(4) * g(4, 4),
            5.0,
        ),
        cond(
            "<γ'',γ'''> = 0",
            a.powi(5) * g(1, 2)
                + a.powi(3) * b * b * g(2, 3)
                + a * a * b.powi(3) * g(1, 4)
                + b.powi(5) * g(3, 4),
            0.0,
        ),
        cond(
            "<γ,γ'''> = 0",
            a.powi(3) * g(1, 2) + a.powi(3) * g(2, 3) + b.powi(3) * g(1, 4) + b.powi(3) * g(3, 4),
            0.0,
        ),
        cond(
            "<γ''',γ'''> = 29",
            a.powi(6) * g(2, 2) + 2.0 * a.powi(3) * b.powi(3) * g(2, 4) + b.powi(6) * g(4, 4),
            29.0,
        ),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HelixClass {
    #[serde(rename = "I1")]
    I1,
    #[serde(rename = "I2")]
    I2,
    #[serde(rename = "I3")]
    I3,
    #[serde(rename = "I4")]
    I4,
    #[serde(rename = "I3'")]
    I3Prime,
    #[serde(rename = "I4'")]
    I4Prime,
}

impl fmt::Display for HelixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HelixClass::I1 => "I1",
            HelixClass::I2 => "I2",
            HelixClass::I3 => "I3",
            HelixClass::I4 => "I4",
            HelixClass::I3Prime => "I3'",
            HelixClass::I4Prime => "I4'",
        })
    }
}

/// Curvatures and complex torsions of a proper-biharmonic helix of order 4
/// in `CP²` with `J̄Ē₁ = cos α₀ Ē₂ + sin α₀ Ē₄`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelixSolution {
    pub alpha0: f64,
    pub branch: Branch,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub tau12: f64,
    pub tau13: f64,
    pub tau14: f64,
    pub tau23: f64,
    pub tau24: f64,
    pub tau34: f64,
    pub class_label: Option<HelixClass>,
}

impl HelixSolution {
    /// `(τ12, τ13, τ14, τ23, τ24, τ34)`.
    pub fn torsions(&self) -> [f64; 6] {
        [self.tau12, self.tau13, self.tau14, self.tau23, self.tau24, self.tau34]
    }

    /// Expansion of `J̄Ē₁` on `Ē₁ .. Ē₄`.
    pub fn je1(&self) -> [f64; 4] {
        [0.0, self.alpha0.cos(), 0.0, self.alpha0.sin()]
    }

    /// Constant-curvature invariants (all curvature derivatives vanish).
    pub fn invariants(&self) -> CurveInvariants {
        CurveInvariants {
            order: 4,
            k: [self.k1, self.k2, self.k3],
            derivs: CurvatureDerivatives::default(),
            tau12: self.tau12,
        }
    }
}

/// `9cos⁴α₀ - 42cos²α₀ + 1`.
pub fn helix_discriminant(alpha0: f64) -> f64 {
    let c2 = alpha0.cos().powi(2);
    9.0 * c2 * c2 - 42.0 * c2 + 1.0
}

/// `k₂⁴ + k₂² sin²α₀ (3cos²α₀ - 1) + 9 sin⁴α₀ cos²α₀`, which vanishes on
/// every solution.
pub fn helix_k2_quartic(alpha0: f64, k2: f64) -> f64 {
    let (s, c) = alpha0.sin_cos();
    let (s2, c2, q) = (s * s, c * c, k2 * k2);
    q * q + q * s2 * (3.0 * c2 - 1.0) + 9.0 * s2 * s2 * c2
}

/// Largest `cos²α₀` with a nonnegative discriminant: `(7 - 4√3)/3`.
pub fn helix_cos2_bound() -> f64 {
    (7.0 - 4.0 * 3f64.sqrt()) / 3.0
}

/// `cos²α₀` at the end of the quoted admissible interval, `(7 - 4√3)/2`.
pub fn helix_cos2_quoted_bound() -> f64 {
    (7.0 - 4.0 * 3f64.sqrt()) / 2.0
}

/// Note for inputs inside the quoted interval but past the discriminant
/// bound, where no real solution exists.
pub fn helix_interval_warning(alpha0: f64) -> Option<String> {
    let c2 = alpha0.cos().powi(2);
    (c2 > helix_cos2_bound() && c2 <= helix_cos2_quoted_bound()).then(|| {
        format!(
            "cos²α₀ = {c2:.6} lies inside the quoted admissible interval (cos²α₀ <= (7-4√3)/2) \
             but past the discriminant bound (7-4√3)/3, so no real k₂ exists"
        )
    })
}

/// Closed-form curvatures of the proper-biharmonic order-4 helix for a given
/// `α₀` and branch of the inner square root.
///
/// Gating is numerical: `sin α₀ cos α₀ != 0`, nonnegative discriminant,
/// `k₂² ∈ (0, 1 + 3cos²α₀)`, and positive `k₁`, `k₃` (which forces
/// `sin α₀ cos α₀ < 0`). The sign in front of `k₂` is chosen to make it
/// positive, which covers both `α₀` regimes at once.
pub fn solve_order4_helix(alpha0: f64, branch: Branch, tol: &ToleranceConfig) -> Result<HelixSolution> {
    if !alpha0.is_finite() {
        return Err(GeometryError::NonFinite("alpha0"));
    }
    let (s, c) = alpha0.sin_cos();
    if s.abs() < 1e-12 {
        return Err(GeometryError::Domain(format!("sin α₀ = 0 (α₀ = {alpha0})")));
    }
    if c.abs() < 1e-12 {
        return Err(GeometryError::Domain(format!(
            "cos α₀ = 0 (α₀ = {alpha0}): the order-4 case degenerates"
        )));
    }
    let disc = helix_discriminant(alpha0);
    if disc < 0.0 {
        return Err(GeometryError::NoSolution { discriminant: disc });
    }
    let inner = 1.0 - 3.0 * c * c + branch.sign() * disc.sqrt();
    let k2_sq = 0.5 * s * s * inner;
    let upper = 1.0 + 3.0 * c * c;
    if !(k2_sq > 0.0 && k2_sq < upper) {
        return Err(GeometryError::ConstraintViolation(format!(
            "k₂² = {k2_sq} outside (0, {upper})"
        )));
    }
    let k2 = k2_sq.sqrt();
    let k3 = -3.0 * (2.0 * alpha0).sin() / (2.0 * k2);
    if k3 <= 0.0 {
        return Err(GeometryError::ConstraintViolation(format!(
            "k₃ = {k3} is not positive; need sin α₀ cos α₀ < 0"
        )));
    }
    let k1 = -(k2 * c - k3 * s) / s;
    if k1 <= 0.0 {
        return Err(GeometryError::ConstraintViolation(format!("k₁ = {k1} is not positive")));
    }
    let mut sol = HelixSolution {
        alpha0,
        branch,
        k1,
        k2,
        k3,
        tau12: -c,
        tau13: 0.0,
        tau14: -s,
        tau23: s,
        tau24: 0.0,
        tau34: c,
        class_label: None,
    };
    if let Classification::Matched { label, .. } = classify_helix_cp2(k1, k2, k3, &sol.torsions(), tol)? {
        sol.class_label = Some(label);
    }
    Ok(sol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDistance {
    pub label: HelixClass,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Classification {
    Matched {
        label: HelixClass,
        distance: f64,
        rows: Vec<RowDistance>,
    },
    Unclassified {
        rows: Vec<RowDistance>,
    },
}

impl Classification {
    pub fn label(&self) -> Option<HelixClass> {
        match self {
            Classification::Matched { label, .. } => Some(*label),
            Classification::Unclassified { .. } => None,
        }
    }

    pub fn rows(&self) -> &[RowDistance] {
        match self {
            Classification::Matched { rows, .. } | Classification::Unclassified { rows } => rows,
        }
    }
}

/// Torsion patterns `(τ12, τ13, τ14, τ23, τ24, τ34)` of the holomorphic
/// helix classes for given curvatures.
///
/// The two `k₁ != k₃` classes with `τ12 = -τ34` are labelled by the sign of
/// `τ12`: negative is `I3`, positive is `I4`.
pub fn class_rows(k1: f64, k2: f64, k3: f64, tol: &ToleranceConfig) -> Vec<(HelixClass, [f64; 6])> {
    let neg = |r: [f64; 6]| r.map(|x| -x);
    let sum = k1 + k3;
    let mu = sum / (k2 * k2 + sum * sum).sqrt();
    let m = k2 * mu / sum;
    let i1 = [mu, 0.0, m, m, 0.0, mu];
    let mut rows = vec![(HelixClass::I1, i1), (HelixClass::I2, neg(i1))];
    let diff = k1 - k3;
    if diff.abs() > tol.classification {
        let nu = diff / (k2 * k2 + diff * diff).sqrt();
        let q = k2 * nu / diff;
        let plus = [nu, 0.0, -q, q, 0.0, -nu];
        let (pos, neg_row) = if nu > 0.0 { (plus, neg(plus)) } else { (neg(plus), plus) };
        rows.push((HelixClass::I3, neg_row));
        rows.push((HelixClass::I4, pos));
    } else {
        let i3p = [0.0, 0.0, -1.0, 1.0, 0.0, 0.0];
        rows.push((HelixClass::I3Prime, i3p));
        rows.push((HelixClass::I4Prime, neg(i3p)));
    }
    rows
}

/// Matches constant complex torsions against the class patterns by
/// max-abs distance.
pub fn classify_helix_cp2(
    k1: f64,
    k2: f64,
    k3: f64,
    torsions: &[f64],
    tol: &ToleranceConfig,
) -> Result<Classification> {
    if !(k1 > 0.0 && k2 > 0.0 && k3 > 0.0) {
        return Err(GeometryError::Domain(format!(
            "curvatures must be positive, got ({k1}, {k2}, {k3})"
        )));
    }
    if torsions.len() != 6 {
        return Err(GeometryError::Structure(format!(
            "expected 6 torsions (τ12, τ13, τ14, τ23, τ24, τ34), got {}",
            torsions.len()
        )));
    }
    if torsions.iter().any(|t| !t.is_finite()) {
        return Err(GeometryError::NonFinite("torsions"));
    }
    let rows: Vec<RowDistance> = class_rows(k1, k2, k3, tol)
        .into_iter()
        .map(|(label, row)| RowDistance {
            label,
            distance: row
                .iter()
                .zip(torsions)
                .map(|(r, t)| (r - t).abs())
                .fold(0.0, f64::max),
        })
        .collect();
    let best = rows
        .iter()
        .min_by(|a, b| a.distance.total_cmp(&b.distance))
        .cloned()
        .expect("class table is never empty");
    Ok(if best.distance <= tol.classification {
        Classification::Matched {
            label: best.label,
            distance: best.distance,
            rows,
        }
    } else {
        Classification::Unclassified { rows }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biharmonic::cpn_bitension_from_invariants;
    use crate::curves::frenet_apparatus;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn pm1_lift_is_unit_speed_on_sphere() {
        let c = lift_curve_tau12_pm1(1).unwrap();
        for s in [0.0, 0.37, 1.9, 5.5] {
            let j = c.jet(s).unwrap();
            assert!((j.position().norm() - 1.0).abs() < 1e-14);
            assert!((j.velocity().norm() - 1.0).abs() < 1e-14);
            assert!((j.derivative(2).norm_sq() - 5.0).abs() < 1e-13);
        }
    }

    #[test]
    fn pm1_rejects_bad_constant_vectors() {
        let e1 = AmbientVector::basis(1, 0);
        // Ĵe₁ itself is not allowed as e₃
        let err = lift_curve_tau12_pm1_with(&e1, &AmbientVector::basis(1, 1), &tol()).unwrap_err();
        assert!(matches!(err, GeometryError::Domain(_)));
    }

    #[test]
    fn pm1_is_the_k_equals_two_holomorphic_circle() {
        let a = lift_curve_tau12_pm1(2).unwrap();
        let b = holomorphic_circle_lift(2.0, &AmbientVector::basis(2, 0), &AmbientVector::basis(2, 2), &tol()).unwrap();
        for s in [0.0, 1.1, 2.5] {
            assert!((&a.position(s) - &b.position(s)).norm() < 1e-14);
        }
    }

    #[test]
    fn gram_conditions_hold_for_pm1() {
        let c = lift_curve_tau12_pm1(1).unwrap();
        let conds = gram_conditions(&c).unwrap();
        assert_eq!(conds.len(), 10);
        for g in conds {
            assert!(g.defect() < 1e-12, "{} off by {}", g.label, g.defect());
        }
    }

    #[test]
    fn sphere_helix_has_requested_curvatures() {
        for (k1, k2) in [(0.3, 0.2), (1.0, 2.0), (2.0, 1.0), (4.0, 0.1)] {
            let h = sphere_helix(k1, k2, 2).unwrap();
            let app = frenet_apparatus(&h, 0.4, 4, &tol()).unwrap();
            assert_eq!(app.order, 3);
            assert!((app.k(1) - k1).abs() < 1e-10 && (app.k(2) - k2).abs() < 1e-10);
        }
        assert!(sphere_helix(0.0, 1.0, 1).is_err());
        assert!(sphere_helix(1.0, -1.0, 1).is_err());
    }

    #[test]
    fn tau12_zero_domains() {
        assert!(lift_curve_tau12_zero(Tau12ZeroKind::Helix, 1.0, 3).is_err());
        assert!(lift_curve_tau12_zero(Tau12ZeroKind::Helix, 0.0, 3).is_err());
        assert!(lift_curve_tau12_zero(Tau12ZeroKind::Helix, 0.5, 2).is_err());
        assert!(lift_curve_tau12_zero(Tau12ZeroKind::Circle, 0.0, 1).is_err());
        let edge = lift_curve_tau12_zero(Tau12ZeroKind::Helix, 1.0 - 1e-6, 3).unwrap();
        let j = edge.jet(2.0).unwrap();
        assert!(j.derivatives().iter().all(AmbientVector::is_finite));
    }

    #[test]
    fn helix_example_k2_squares() {
        let alpha = (-0.1f64).acos();
        let plus = solve_order4_helix(alpha, Branch::Plus, &tol()).unwrap();
        let minus = solve_order4_helix(alpha, Branch::Minus, &tol()).unwrap();
        assert!((plus.k2 * plus.k2 - 0.857423).abs() < 5e-7);
        assert!((minus.k2 * minus.k2 - 0.102877).abs() < 5e-7);
        for sol in [plus, minus] {
            assert!(helix_k2_quartic(alpha, sol.k2).abs() < 1e-12);
            let c2 = alpha.cos().powi(2);
            assert!((sol.k1 * sol.k1 + sol.k2 * sol.k2 - 1.0 - 3.0 * c2).abs() < 1e-10);
            assert_eq!(sol.class_label, Some(HelixClass::I4));
        }
    }

    #[test]
    fn helix_solver_errors() {
        let no = solve_order4_helix((-0.5f64).acos(), Branch::Plus, &tol()).unwrap_err();
        match no {
            GeometryError::NoSolution { discriminant } => {
                assert!((discriminant - (9.0 / 16.0 - 42.0 / 4.0 + 1.0)).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            solve_order4_helix(0.0, Branch::Plus, &tol()),
            Err(GeometryError::Domain(_))
        ));
        assert!(matches!(
            solve_order4_helix(FRAC_PI_2, Branch::Plus, &tol()),
            Err(GeometryError::Domain(_))
        ));
        // sin α₀ cos α₀ > 0 gives k₃ < 0
        assert!(matches!(
            solve_order4_helix((0.1f64).acos(), Branch::Plus, &tol()),
            Err(GeometryError::ConstraintViolation(_))
        ));
    }

    #[test]
    fn helix_in_second_regime_is_class_i3() {
        let alpha = std::f64::consts::PI + (-0.1f64).acos();
        let sol = solve_order4_helix(alpha, Branch::Minus, &tol()).unwrap();
        assert!(sol.tau12 < 0.0 && sol.tau23 < 0.0);
        assert_eq!(sol.class_label, Some(HelixClass::I3));
        let r = cpn_bitension_from_invariants(&sol.invariants(), &sol.je1(), &tol()).unwrap();
        assert!(r.norm < 1e-12);
    }

    #[test]
    fn interval_warning_only_in_the_gap() {
        let gap_cos = -(0.5 * (helix_cos2_bound() + helix_cos2_quoted_bound())).sqrt();
        assert!(helix_interval_warning(gap_cos.acos()).is_some());
        assert!(helix_interval_warning((-0.1f64).acos()).is_none());
    }

    #[test]
    fn equal_k1_k3_routes_to_primed_classes() {
        let c = classify_helix_cp2(1.0, 0.5, 1.0, &[0.0, 0.0, -1.0, 1.0, 0.0, 0.0], &tol()).unwrap();
        assert_eq!(c.label(), Some(HelixClass::I3Prime));
        let c = classify_helix_cp2(1.0, 0.5, 1.0, &[0.0, 0.0, 1.0, -1.0, 0.0, 0.0], &tol()).unwrap();
        assert_eq!(c.label(), Some(HelixClass::I4Prime));
    }

    #[test]
    fn mu_rows_and_no_match() {
        let (k1, k2, k3) = (1.0f64, 2.0f64, 0.5f64);
        let mu = (k1 + k3) / (k2 * k2 + (k1 + k3).powi(2)).sqrt();
        let m = k2 * mu / (k1 + k3);
        let c = classify_helix_cp2(k1, k2, k3, &[mu, 0.0, m, m, 0.0, mu], &tol()).unwrap();
        assert_eq!(c.label(), Some(HelixClass::I1));
        let c = classify_helix_cp2(k1, k2, k3, &[-mu, 0.0, -m, -m, 0.0, -mu], &tol()).unwrap();
        assert_eq!(c.label(), Some(HelixClass::I2));
        let c = classify_helix_cp2(k1, k2, k3, &[0.3; 6], &tol()).unwrap();
        assert_eq!(c.label(), None);
        assert_eq!(c.rows().len(), 4);
        assert!(classify_helix_cp2(k1, k2, k3, &[0.0; 5], &tol()).is_err());
        assert!(classify_helix_cp2(-1.0, k2, k3, &[0.0; 6], &tol()).is_err());
    }
}
