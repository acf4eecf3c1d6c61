//! Curve jets, covariant differentiation along sphere curves and the Frenet
//! apparatus (frames, curvatures, curvature derivatives, complex torsions).

use crate::ambient::{hopf_vector_field, AmbientVector, SpherePoint};
use crate::error::{GeometryError, Result};
use crate::jet::{ScalarJet, VectorJet};
use crate::tolerance::ToleranceConfig;

/// Number of stored derivatives: `γ, γ', ..., γ^(5)`.
pub const JET_LEN: usize = 6;

/// Highest osculating order the 5-jet can resolve.
pub const MAX_FRENET_ORDER: usize = JET_LEN - 1;

/// Arc-length curve data at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveJet {
    pub s: f64,
    derivs: Vec<AmbientVector>,
}

impl CurveJet {
    pub fn new(s: f64, derivs: Vec<AmbientVector>) -> Result<Self> {
        if derivs.len() != JET_LEN {
            return Err(GeometryError::Structure(format!(
                "curve jet needs {JET_LEN} derivatives, got {}",
                derivs.len()
            )));
        }
        for d in &derivs[1..] {
            derivs[0].check_same_dim(d)?;
        }
        Ok(Self { s, derivs })
    }

    pub fn position(&self) -> &AmbientVector {
        &self.derivs[0]
    }

    pub fn velocity(&self) -> &AmbientVector {
        &self.derivs[1]
    }

    /// `k`-th derivative, `0 <= k <= 5`.
    pub fn derivative(&self, k: usize) -> &AmbientVector {
        &self.derivs[k]
    }

    pub fn derivatives(&self) -> &[AmbientVector] {
        &self.derivs
    }

    pub fn n(&self) -> usize {
        self.derivs[0].n()
    }

    /// Checks finiteness, `|γ| = 1`, `|γ'| = 1` and `<γ, γ'> = 0`.
    pub fn validate(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.derivs.iter().any(|d| !d.is_finite()) || !self.s.is_finite() {
            return Err(GeometryError::NonFinite("curve jet"));
        }
        let defect = self.position().norm() - 1.0;
        if defect.abs() > tol.unit_norm {
            return Err(GeometryError::NotUnit { defect });
        }
        let speed = self.velocity().norm() - 1.0;
        if speed.abs() > tol.unit_norm {
            return Err(GeometryError::NotArcLength(format!("|γ'| - 1 = {speed:e}")));
        }
        let radial = self.position().dot(self.velocity());
        if radial.abs() > tol.orthogonality {
            return Err(GeometryError::NotArcLength(format!("<γ, γ'> = {radial:e}")));
        }
        Ok(())
    }

    pub(crate) fn position_jet(&self) -> VectorJet {
        VectorJet::from_derivatives(&self.derivs)
    }
}

/// A curve on `S^{2n+1}` that can be evaluated at any arc-length parameter.
///
/// Implementations must be stateless so that distinct parameters can be
/// evaluated concurrently.
pub trait CurveFamily: Send + Sync {
    fn jet(&self, s: f64) -> Result<CurveJet>;
    fn label(&self) -> &str;
    fn params(&self) -> Vec<(String, f64)>;
    /// Complex dimension of the target `CP^n`.
    fn n(&self) -> usize;
}

/// A curve given only by positions, differentiated by central differences
/// with a caller-supplied step.
///
/// Orders 1 and 2 use the 5-point fourth-order stencils, orders 3 and 4 the
/// 5-point second-order stencils, and order 5 the 7-point second-order
/// stencil (the shortest central one).
pub struct SampledCurve<F> {
    position: F,
    step: f64,
    n: usize,
    label: String,
}

impl<F> SampledCurve<F>
where
    F: Fn(f64) -> AmbientVector + Send + Sync,
{
    pub fn new(label: impl Into<String>, n: usize, step: f64, position: F) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(GeometryError::Domain(format!("step must be positive, got {step}")));
        }
        Ok(Self {
            position,
            step,
            n,
            label: label.into(),
        })
    }
}

impl<F> CurveFamily for SampledCurve<F>
where
    F: Fn(f64) -> AmbientVector + Send + Sync,
{
    fn jet(&self, s: f64) -> Result<CurveJet> {
        let h = self.step;
        let f = |k: i32| (self.position)(s + k as f64 * h);
        let (m3, m2, m1, p0, p1, p2, p3) = (f(-3), f(-2), f(-1), f(0), f(1), f(2), f(3));
        for p in [&m3, &m2, &m1, &p1, &p2, &p3] {
            p0.check_same_dim(p)?;
        }
        let combo = |terms: &[(f64, &AmbientVector)], scale: f64| {
            let mut acc = AmbientVector::zeros(p0.n());
            for (c, v) in terms {
                acc.axpy(*c, v);
            }
            acc.scaled(scale)
        };
        let d1 = combo(&[(1.0, &m2), (-8.0, &m1), (8.0, &p1), (-1.0, &p2)], 1.0 / (12.0 * h));
        let d2 = combo(
            &[(-1.0, &m2), (16.0, &m1), (-30.0, &p0), (16.0, &p1), (-1.0, &p2)],
            1.0 / (12.0 * h * h),
        );
        let d3 = combo(&[(-1.0, &m2), (2.0, &m1), (-2.0, &p1), (1.0, &p2)], 1.0 / (2.0 * h.powi(3)));
        let d4 = combo(
            &[(1.0, &m2), (-4.0, &m1), (6.0, &p0), (-4.0, &p1), (1.0, &p2)],
            1.0 / h.powi(4),
        );
        let d5 = combo(
            &[(-1.0, &m3), (4.0, &m2), (-5.0, &m1), (5.0, &p1), (-4.0, &p2), (1.0, &p3)],
            1.0 / (2.0 * h.powi(5)),
        );
        CurveJet::new(s, vec![p0, d1, d2, d3, d4, d5])
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn params(&self) -> Vec<(String, f64)> {
        vec![("step".into(), self.step)]
    }

    fn n(&self) -> usize {
        self.n
    }
}

/// Levi-Civita derivative on the unit sphere of a tangent field along the
/// curve: `V' + <V, γ'> γ`.
pub fn sphere_covariant_derivative(
    jet: &CurveJet,
    field_value: &AmbientVector,
    field_derivative: &AmbientVector,
    tol: &ToleranceConfig,
) -> Result<AmbientVector> {
    let radial = field_value.try_dot(jet.position())?;
    if radial.abs() > tol.orthogonality * field_value.norm().max(1.0) {
        return Err(GeometryError::NotTangent { defect: radial });
    }
    jet.position().check_same_dim(field_derivative)?;
    let mut out = field_derivative.clone();
    out.axpy(field_value.dot(jet.velocity()), jet.position());
    Ok(out)
}

/// Jet form of [`sphere_covariant_derivative`]; drops one order.
pub(crate) fn covariant_derivative_jet(
    position: &VectorJet,
    velocity: &VectorJet,
    field: &VectorJet,
) -> VectorJet {
    let along = field.dot(velocity);
    field.differentiate().add(&position.scale_by(&along))
}

/// Complex torsions `τ_ij = <E_i, Ĵ E_j>` of an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTorsions {
    d: usize,
    values: Vec<f64>,
}

impl ComplexTorsions {
    pub fn from_frames(frames: &[AmbientVector]) -> Self {
        let d = frames.len();
        let jframes: Vec<_> = frames.iter().map(AmbientVector::j_apply).collect();
        let mut values = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                values[i * d + j] = frames[i].dot(&jframes[j]);
            }
        }
        Self { d, values }
    }

    pub fn order(&self) -> usize {
        self.d
    }

    /// `τ_ij` with 1-based indices; zero outside the frame.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == 0 || j == 0 || i > self.d || j > self.d {
            return 0.0;
        }
        self.values[(i - 1) * self.d + (j - 1)]
    }

    /// The six torsions `(τ12, τ13, τ14, τ23, τ24, τ34)` of an order-4 frame.
    pub fn upper_six(&self) -> [f64; 6] {
        [
            self.get(1, 2),
            self.get(1, 3),
            self.get(1, 4),
            self.get(2, 3),
            self.get(2, 4),
            self.get(3, 4),
        ]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CurvatureDerivatives {
    pub k1_prime: f64,
    pub k1_second: f64,
    pub k2_prime: f64,
}

/// Frenet frame, curvatures and complex torsions at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct FrenetApparatus {
    pub s: f64,
    /// `γ(s)`, needed for `ξ` and for lifting.
    pub position: AmbientVector,
    /// Osculating order `d`.
    pub order: usize,
    pub frames: Vec<AmbientVector>,
    /// `k_1 .. k_{d-1}`, all above the rank-truncation threshold.
    pub curvatures: Vec<f64>,
    pub curvature_derivs: CurvatureDerivatives,
    pub torsions: ComplexTorsions,
}

impl FrenetApparatus {
    /// `k_i` (1-based), zero past the osculating order.
    pub fn k(&self, i: usize) -> f64 {
        if i == 0 {
            return 0.0;
        }
        self.curvatures.get(i - 1).copied().unwrap_or(0.0)
    }

    /// `E_i` (1-based).
    pub fn frame(&self, i: usize) -> Option<&AmbientVector> {
        if i == 0 {
            return None;
        }
        self.frames.get(i - 1)
    }

    pub fn n(&self) -> usize {
        self.position.n()
    }
}

/// Frenet frame and curvatures carried as jets.
#[derive(Debug, Clone)]
pub(crate) struct FrenetJets {
    pub position: VectorJet,
    pub frames: Vec<VectorJet>,
    pub curvatures: Vec<ScalarJet>,
}

fn normalized(v: &VectorJet) -> (VectorJet, ScalarJet) {
    let len = v.norm_sq().sqrt();
    (v.scale_by(&len.recip()), len)
}

pub(crate) fn frenet_jets(
    jet: &CurveJet,
    max_order: usize,
    tol: &ToleranceConfig,
) -> Result<FrenetJets> {
    jet.validate(tol)?;
    let limit = MAX_FRENET_ORDER.min(2 * jet.n() + 1);
    if max_order == 0 || max_order > limit {
        return Err(GeometryError::Domain(format!(
            "max_order must lie in 1..={limit} for n = {}, got {max_order}",
            jet.n()
        )));
    }

    let position = jet.position_jet();
    let velocity = position.differentiate();
    let (e1, _) = normalized(&velocity);
    let mut frames = vec![e1];
    let mut curvatures: Vec<ScalarJet> = Vec::new();
    // k_1 k_2 ... k_{i-1}
    let mut product = ScalarJet::constant(1.0, velocity.order());
    // ∇^{i} E_1
    let mut w = velocity;

    for _ in 1..max_order {
        w = covariant_derivative_jet(&position, &position.differentiate(), &w);
        let mut u = w.clone();
        for e in &frames {
            u = u.sub(&e.scale_by(&w.dot(e)));
        }
        let rho = u.norm_sq().value().max(0.0).sqrt();
        let k_value = rho / product.value();
        if !(k_value.is_finite()) {
            return Err(GeometryError::NonFinite("Frenet curvature"));
        }
        if k_value < tol.rank_truncation {
            break;
        }
        let (e_next, rho_jet) = normalized(&u);
        let k_jet = rho_jet.mul(&product.recip());
        product = product.mul(&k_jet);
        frames.push(e_next);
        curvatures.push(k_jet);
    }

    Ok(FrenetJets {
        position,
        frames,
        curvatures,
    })
}

impl FrenetJets {
    pub(crate) fn apparatus(&self, s: f64) -> FrenetApparatus {
        let frames: Vec<AmbientVector> = self.frames.iter().map(|f| f.value().clone()).collect();
        let curvatures: Vec<f64> = self.curvatures.iter().map(ScalarJet::value).collect();
        let deriv = |i: usize, k: usize| {
            self.curvatures
                .get(i)
                .and_then(|j| j.derivative(k))
                .unwrap_or(0.0)
        };
        FrenetApparatus {
            s,
            position: self.position.value().clone(),
            order: frames.len(),
            torsions: ComplexTorsions::from_frames(&frames),
            frames,
            curvatures,
            curvature_derivs: CurvatureDerivatives {
                k1_prime: deriv(0, 1),
                k1_second: deriv(0, 2),
                k2_prime: deriv(1, 1),
            },
        }
    }
}

/// Frenet apparatus of a curve family at `s`.
///
/// Iterated covariant derivatives of `E_1 = γ'` are orthonormalized in
/// order; `k_i` is the length of the new orthogonal component divided by
/// `k_1 ... k_{i-1}`, and the process stops at the first `k_i` below the
/// rank-truncation threshold. Curvature derivatives come from the same jets.
pub fn frenet_apparatus(
    family: &dyn CurveFamily,
    s: f64,
    max_order: usize,
    tol: &ToleranceConfig,
) -> Result<FrenetApparatus> {
    frenet_apparatus_from_jet(&family.jet(s)?, max_order, tol)
}

pub fn frenet_apparatus_from_jet(
    jet: &CurveJet,
    max_order: usize,
    tol: &ToleranceConfig,
) -> Result<FrenetApparatus> {
    Ok(frenet_jets(jet, max_order, tol)?.apparatus(jet.s))
}

/// Interprets an upstairs (sphere) apparatus of a horizontal curve as the
/// lift of a `CP^n` Frenet apparatus.
///
/// A frame member parallel to `ξ` is the vertical direction; it must be the
/// last member, and is removed together with the curvature linking it. With
/// no vertical member the apparatus passes through unchanged.
pub fn downstairs_apparatus(
    apparatus: &FrenetApparatus,
    p: &SpherePoint,
    tol: &ToleranceConfig,
) -> Result<FrenetApparatus> {
    let xi = hopf_vector_field(p);
    let e1_defect = apparatus.frames[0].try_dot(&xi)?;
    if e1_defect.abs() > tol.orthogonality {
        return Err(GeometryError::NotHorizontal { defect: e1_defect });
    }

    // Values between the two bands mean the frame is neither horizontal nor
    // vertical; 1e-6 separates them for frames that come from jets.
    let band = tol.orthogonality.max(1e-6);
    let mut vertical = None;
    for (i, e) in apparatus.frames.iter().enumerate() {
        let c = e.dot(&xi).abs();
        if c > 1.0 - band {
            if vertical.is_some() {
                return Err(GeometryError::Classification("two vertical frame members".into()));
            }
            vertical = Some(i);
        } else if c > band {
            return Err(GeometryError::Classification(format!(
                "frame member E{} is neither horizontal nor vertical (|<E, ξ>| = {c:e})",
                i + 1
            )));
        }
    }

    let Some(v) = vertical else {
        return Ok(apparatus.clone());
    };
    if v + 1 != apparatus.order {
        return Err(GeometryError::Classification(format!(
            "vertical member E{} is not last in a frame of order {}",
            v + 1,
            apparatus.order
        )));
    }

    let order = apparatus.order - 1;
    let frames = apparatus.frames[..order].to_vec();
    let curvatures = apparatus.curvatures[..order - 1].to_vec();
    let mut derivs = apparatus.curvature_derivs;
    if order < 3 {
        derivs.k2_prime = 0.0;
    }
    if order < 2 {
        derivs = CurvatureDerivatives::default();
    }
    Ok(FrenetApparatus {
        s: apparatus.s,
        position: apparatus.position.clone(),
        order,
        torsions: ComplexTorsions::from_frames(&frames),
        frames,
        curvatures,
        curvature_derivs: derivs,
    })
}
