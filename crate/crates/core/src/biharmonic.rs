//! Tension and bitension residuals of curves in `S^{2n+1}` and `CP^n`,
//! λ-biharmonicity, and the Hopf-lift relation for horizontal curve lifts.
//!
//! Sign conventions: the rough Laplacian is `Δ = -trace ∇²`, the bitension
//! field is `τ₂ = -Δτ - trace R(dφ, τ) dφ`, and `CP^n` carries holomorphic
//! sectional curvature 4. For a unit-speed sphere curve `τ = ∇_{E₁}E₁` and
//! the curvature term contributes `+τ`.

use serde::Serialize;

use crate::ambient::{hopf_vector_field, AmbientVector, SpherePoint};
use crate::curves::{
    covariant_derivative_jet, downstairs_apparatus, frenet_jets, CurvatureDerivatives, CurveFamily,
    CurveJet, FrenetApparatus, MAX_FRENET_ORDER,
};
use crate::error::{GeometryError, Result};
use crate::tolerance::ToleranceConfig;

pub const CONVENTION_NOTE: &str =
    "Δ = -trace ∇² (geometers' sign); τ₂ = -Δτ - trace R(dφ,τ)dφ; CP^n has holomorphic sectional curvature 4";

/// Number of Frenet slots a frame-coefficient residual carries.
pub const FRAME_SLOTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualValue {
    /// Coefficients on `E₁ .. E₄`.
    Frame(Vec<f64>),
    Ambient(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BitensionResidual {
    pub value: ResidualValue,
    pub norm: f64,
    pub lambda: f64,
    pub convention_note: &'static str,
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl BitensionResidual {
    pub fn from_frame(coeffs: Vec<f64>, lambda: f64) -> Self {
        Self {
            norm: euclid(&coeffs),
            value: ResidualValue::Frame(coeffs),
            lambda,
            convention_note: CONVENTION_NOTE,
        }
    }

    pub fn from_ambient(v: AmbientVector, lambda: f64) -> Self {
        Self {
            norm: v.norm(),
            value: ResidualValue::Ambient(v.into_coords()),
            lambda,
            convention_note: CONVENTION_NOTE,
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        match &self.value {
            ResidualValue::Frame(c) | ResidualValue::Ambient(c) => c,
        }
    }
}

/// Scalar Frenet data entering the bitension formulas.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveInvariants {
    pub order: usize,
    /// `k₁, k₂, k₃` (zero past the osculating order).
    pub k: [f64; 3],
    pub derivs: CurvatureDerivatives,
    pub tau12: f64,
}

impl CurveInvariants {
    pub fn from_apparatus(app: &FrenetApparatus) -> Result<Self> {
        if app.order > FRAME_SLOTS {
            return Err(GeometryError::UnsupportedOrder {
                order: app.order,
                k4: app.k(4),
            });
        }
        Ok(Self {
            order: app.order,
            k: [app.k(1), app.k(2), app.k(3)],
            derivs: app.curvature_derivs,
            tau12: app.torsions.get(1, 2),
        })
    }
}

/// Frame coefficients of the tension field, `τ = k₁E₂`.
pub fn tension_coefficients(inv: &CurveInvariants) -> Vec<f64> {
    vec![0.0, inv.k[0], 0.0, 0.0]
}

/// `[-3k₁k₁', k₁'' - k₁³ - k₁k₂² + k₁, 2k₁'k₂ + k₁k₂', k₁k₂k₃]`.
pub fn sphere_bitension_coefficients(inv: &CurveInvariants) -> Vec<f64> {
    let [k1, k2, k3] = inv.k;
    let d = inv.derivs;
    vec![
        -3.0 * k1 * d.k1_prime,
        d.k1_second - k1 * k1 * k1 - k1 * k2 * k2 + k1,
        2.0 * d.k1_prime * k2 + k1 * d.k2_prime,
        k1 * k2 * k3,
    ]
}

/// Bitension of a curve in the unit sphere, on its Frenet frame.
pub fn sphere_curve_bitension(app: &FrenetApparatus) -> Result<BitensionResidual> {
    let inv = CurveInvariants::from_apparatus(app)?;
    Ok(BitensionResidual::from_frame(sphere_bitension_coefficients(&inv), 0.0))
}

/// Bitension of a curve in `CP^n` from its invariants and the expansion of
/// `J̄Ē₁` on `Ē₁ .. Ē₄` (shorter lists are zero padded).
pub fn cpn_bitension_from_invariants(
    inv: &CurveInvariants,
    je1: &[f64],
    tol: &ToleranceConfig,
) -> Result<BitensionResidual> {
    if je1.len() > FRAME_SLOTS {
        return Err(GeometryError::Structure(format!(
            "J̄Ē₁ expansion has {} entries, at most {FRAME_SLOTS} allowed",
            je1.len()
        )));
    }
    if je1.iter().any(|c| !c.is_finite()) {
        return Err(GeometryError::NonFinite("J̄Ē₁ coefficients"));
    }
    let len = euclid(je1);
    if len > 1.0 + tol.unit_norm {
        return Err(GeometryError::Domain(format!(
            "J̄Ē₁ is a unit vector but its coefficients have norm {len}"
        )));
    }
    let mut coeffs = sphere_bitension_coefficients(inv);
    let w = -3.0 * inv.k[0] * inv.tau12;
    for (c, j) in coeffs.iter_mut().zip(je1) {
        *c += w * j;
    }
    Ok(BitensionResidual::from_frame(coeffs, 0.0))
}

/// [`cpn_bitension_from_invariants`] for a downstairs apparatus.
pub fn cpn_curve_bitension(
    app: &FrenetApparatus,
    je1: &[f64],
    tol: &ToleranceConfig,
) -> Result<BitensionResidual> {
    cpn_bitension_from_invariants(&CurveInvariants::from_apparatus(app)?, je1, tol)
}

/// Expansion of `J̄Ē₁` on the frame: the coefficient on `E_i` is `-τ_{1i}`.
pub fn je1_coefficients(app: &FrenetApparatus) -> Vec<f64> {
    (1..=app.order.min(FRAME_SLOTS))
        .map(|i| -app.torsions.get(1, i))
        .collect()
}

/// Horizontal lift of the `CP^n` bitension of a downstairs apparatus whose
/// frames are horizontal upstairs vectors.
pub fn cpn_bitension_lift(app: &FrenetApparatus) -> Result<AmbientVector> {
    let inv = CurveInvariants::from_apparatus(app)?;
    let coeffs = sphere_bitension_coefficients(&inv);
    let mut out = AmbientVector::zeros(app.n());
    for (c, e) in coeffs.iter().zip(&app.frames) {
        out.axpy(*c, e);
    }
    out.axpy(-3.0 * inv.k[0] * inv.tau12, &app.frames[0].j_apply());
    Ok(out)
}

/// `τ₂ - λτ` on a common frame.
pub fn lambda_biharmonic_residual(
    tau2: &BitensionResidual,
    tau: &[f64],
    lambda: f64,
) -> Result<BitensionResidual> {
    let ResidualValue::Frame(c) = &tau2.value else {
        return Err(GeometryError::Structure("λ-residual needs frame coefficients".into()));
    };
    if c.len() != tau.len() {
        return Err(GeometryError::Structure(format!(
            "frame length mismatch: {} vs {}",
            c.len(),
            tau.len()
        )));
    }
    let out = c.iter().zip(tau).map(|(a, t)| a - lambda * t).collect();
    Ok(BitensionResidual::from_frame(out, lambda))
}

/// `|γ'''' + 6γ'' + γ|`.
pub fn quartic_ode_residual(jet: &CurveJet) -> f64 {
    let mut r = jet.derivative(4).clone();
    r.axpy(6.0, jet.derivative(2));
    r += jet.position();
    r.norm()
}

/// Bitension of a sphere curve assembled directly from the jet by iterated
/// covariant differentiation: `∇∇τ + τ` with `τ = ∇γ'`.
pub fn extrinsic_sphere_bitension(jet: &CurveJet, tol: &ToleranceConfig) -> Result<AmbientVector> {
    jet.validate(tol)?;
    let pos = jet.position_jet();
    let vel = pos.differentiate();
    let tau = covariant_derivative_jet(&pos, &vel, &vel);
    let w2 = covariant_derivative_jet(&pos, &vel, &tau);
    let w3 = covariant_derivative_jet(&pos, &vel, &w2);
    Ok(w3.value() + tau.value())
}

fn check_horizontal(jet: &CurveJet, tol: &ToleranceConfig) -> Result<SpherePoint> {
    jet.validate(tol)?;
    let p = SpherePoint::new(jet.position().clone(), tol.unit_norm)?;
    let defect = jet.velocity().dot(&hopf_vector_field(&p));
    if defect.abs() > tol.orthogonality {
        return Err(GeometryError::NotHorizontal { defect });
    }
    Ok(p)
}

/// Right-hand side of the Hopf relation for the tube over a horizontal
/// curve lift:
/// `τ₂ - 4Ĵ(Ĵτ)^⊤ + 2 (d/ds <Ĵτ, E₁>) ξ`, with `⊤` the projection onto
/// `span{E₁, ξ}`. The `ξ`-derivative of the divergence vanishes because the
/// tube is invariant under the Hopf flow, leaving a single `s`-derivative.
/// Vanishes exactly when the projected curve is biharmonic in `CP^n`.
pub fn hopf_relation_check(
    family: &dyn CurveFamily,
    s: f64,
    tol: &ToleranceConfig,
) -> Result<BitensionResidual> {
    let jet = family.jet(s)?;
    let p = check_horizontal(&jet, tol)?;
    let xi = hopf_vector_field(&p);

    let pos = jet.position_jet();
    let vel = pos.differentiate();
    let tau = covariant_derivative_jet(&pos, &vel, &vel);
    let w2 = covariant_derivative_jet(&pos, &vel, &tau);
    let w3 = covariant_derivative_jet(&pos, &vel, &w2);
    let tau2 = w3.value() + tau.value();

    let jtau = tau.j_apply();
    let along = jtau.dot(&vel);
    let e1 = vel.value();
    let mut tangential = e1.scaled(along.value());
    tangential.axpy(jtau.value().dot(&xi), &xi);

    let mut rhs = tau2;
    rhs.axpy(-4.0, &tangential.j_apply());
    let divergence = along.derivative(1).unwrap_or(0.0);
    rhs.axpy(2.0 * divergence, &xi);
    Ok(BitensionResidual::from_ambient(rhs, 0.0))
}

/// `|RHS - lift(τ₂(γ̄))|`: compares [`hopf_relation_check`] with the lift of
/// the downstairs bitension computed from the Frenet formulas.
pub fn hopf_relation_defect(family: &dyn CurveFamily, s: f64, tol: &ToleranceConfig) -> Result<f64> {
    let rhs = hopf_relation_check(family, s, tol)?;
    let jet = family.jet(s)?;
    let p = check_horizontal(&jet, tol)?;
    let max_order = MAX_FRENET_ORDER.min(2 * family.n() + 1);
    let up = frenet_jets(&jet, max_order, tol)?.apparatus(s);
    let down = downstairs_apparatus(&up, &p, tol)?;
    let lift = cpn_bitension_lift(&down)?;
    let rhs = AmbientVector::new(rhs.coefficients().to_vec())?;
    Ok((&rhs - &lift).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::ComplexTorsions;

    fn invariants(k1: f64, k2: f64, k3: f64) -> CurveInvariants {
        CurveInvariants {
            order: 1 + [k1, k2, k3].iter().take_while(|k| **k > 0.0).count(),
            k: [k1, k2, k3],
            ..Default::default()
        }
    }

    #[test]
    fn geodesic_is_harmonic() {
        let inv = invariants(0.0, 0.0, 0.0);
        let r = BitensionResidual::from_frame(sphere_bitension_coefficients(&inv), 0.0);
        assert_eq!(r.norm, 0.0);
        let l = lambda_biharmonic_residual(&r, &tension_coefficients(&inv), 7.5).unwrap();
        assert_eq!(l.norm, 0.0);
    }

    #[test]
    fn unit_circle_is_biharmonic_in_sphere() {
        let c = sphere_bitension_coefficients(&invariants(1.0, 0.0, 0.0));
        assert!(euclid(&c) < 1e-15);
    }

    #[test]
    fn helix_two_one_is_minus_four_biharmonic() {
        let inv = invariants(2.0, 1.0, 0.0);
        let c = sphere_bitension_coefficients(&inv);
        assert_eq!(c[1], -8.0);
        let tau2 = BitensionResidual::from_frame(c, 0.0);
        let same = lambda_biharmonic_residual(&tau2, &tension_coefficients(&inv), 0.0).unwrap();
        assert_eq!(same.coefficients(), tau2.coefficients());
        let r = lambda_biharmonic_residual(&tau2, &tension_coefficients(&inv), -4.0).unwrap();
        assert!(r.norm < 1e-15);
        assert_eq!(r.lambda, -4.0);
    }

    #[test]
    fn holomorphic_circle_with_curvature_two() {
        for tau12 in [1.0, -1.0] {
            let inv = CurveInvariants {
                tau12,
                ..invariants(2.0, 0.0, 0.0)
            };
            let r = cpn_bitension_from_invariants(&inv, &[0.0, -tau12], &ToleranceConfig::default()).unwrap();
            assert!(r.norm < 1e-15, "{:?}", r.value);
        }
    }

    #[test]
    fn frame_mismatch_and_oversized_je1_are_rejected() {
        let tau2 = BitensionResidual::from_frame(vec![0.0; 4], 0.0);
        assert!(matches!(
            lambda_biharmonic_residual(&tau2, &[0.0; 3], -4.0),
            Err(GeometryError::Structure(_))
        ));
        let inv = invariants(1.0, 0.0, 0.0);
        assert!(matches!(
            cpn_bitension_from_invariants(&inv, &[0.0, 1.5], &ToleranceConfig::default()),
            Err(GeometryError::Domain(_))
        ));
    }

    #[test]
    fn order_five_is_unsupported() {
        let frames: Vec<_> = (0..5).map(|i| AmbientVector::basis(2, i)).collect();
        let app = FrenetApparatus {
            s: 0.0,
            position: AmbientVector::basis(2, 5),
            order: 5,
            torsions: ComplexTorsions::from_frames(&frames),
            frames,
            curvatures: vec![1.0, 1.0, 1.0, 0.5],
            curvature_derivs: Default::default(),
        };
        assert_eq!(
            sphere_curve_bitension(&app),
            Err(GeometryError::UnsupportedOrder { order: 5, k4: 0.5 })
        );
    }
}
