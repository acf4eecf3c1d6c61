//! Coordinate model of `R^{2n+2} = C^{n+1}`.
//!
//! Complex coordinate `z_k` occupies the real slots `(2k-1, 2k)` (1-based),
//! i.e. `z_k = x[2k-2] + i x[2k-1]` with 0-based indexing. `Ĵ` is
//! multiplication by `i`, acting blockwise as `(u, v) -> (-v, u)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{GeometryError, Result};

/// A point or tangent vector of `R^{2n+2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector {
    coords: Vec<f64>,
}

impl AmbientVector {
    /// Validated constructor: even length `>= 4`, all entries finite.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 4 || !coords.len().is_multiple_of(2) {
            return Err(GeometryError::BadLength(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::NonFinite("ambient vector"));
        }
        Ok(Self { coords })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "complex dimension must be positive");
        Self {
            coords: vec![0.0; 2 * n + 2],
        }
    }

    /// Real basis vector `e_index` (0-based) in `R^{2n+2}`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut v = Self::zeros(n);
        v.coords[index] = 1.0;
        v
    }

    /// Unit vector along the real part of complex axis `k` (0-based).
    pub fn complex_axis(n: usize, k: usize) -> Self {
        Self::basis(n, 2 * k)
    }

    /// Copy of `self` embedded in a larger space by zero padding.
    pub fn padded(&self, n: usize) -> Self {
        assert!(2 * n + 2 >= self.coords.len());
        let mut coords = self.coords.clone();
        coords.resize(2 * n + 2, 0.0);
        Self { coords }
    }

    /// Complex dimension `n` of the target `CP^n`.
    pub fn n(&self) -> usize {
        self.coords.len() / 2 - 1
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(GeometryError::Dimension {
                expected: self.coords.len(),
                got: other.coords.len(),
            });
        }
        Ok(())
    }

    /// Euclidean inner product. Panics on dimension mismatch; use
    /// [`AmbientVector::try_dot`] for unvalidated input.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.coords.len(), other.coords.len(), "dimension mismatch");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn try_dot(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self.dot(other))
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: f64, other: &Self) {
        assert_eq!(self.coords.len(), other.coords.len(), "dimension mismatch");
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += factor * b;
        }
    }

    /// The complex structure `Ĵ`: `(u, v) -> (-v, u)` on every coordinate pair.
    pub fn j_apply(&self) -> Self {
        let mut out = vec![0.0; self.coords.len()];
        for (pair, dst) in self.coords.chunks_exact(2).zip(out.chunks_exact_mut(2)) {
            dst[0] = -pair[1];
            dst[1] = pair[0];
        }
        Self { coords: out }
    }
}

/// Checked form of [`AmbientVector::j_apply`] for use on raw coordinates.
pub fn j_apply(coords: &[f64]) -> Result<AmbientVector> {
    Ok(AmbientVector::new(coords.to_vec())?.j_apply())
}

impl Add for &AmbientVector {
    type Output = AmbientVector;
    fn add(self, rhs: &AmbientVector) -> AmbientVector {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Add for AmbientVector {
    type Output = AmbientVector;
    fn add(mut self, rhs: AmbientVector) -> AmbientVector {
        self.axpy(1.0, &rhs);
        self
    }
}

impl AddAssign<&AmbientVector> for AmbientVector {
    fn add_assign(&mut self, rhs: &AmbientVector) {
        self.axpy(1.0, rhs);
    }
}

impl Sub for &AmbientVector {
    type Output = AmbientVector;
    fn sub(self, rhs: &AmbientVector) -> AmbientVector {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Sub for AmbientVector {
    type Output = AmbientVector;
    fn sub(mut self, rhs: AmbientVector) -> AmbientVector {
        self.axpy(-1.0, &rhs);
        self
    }
}

impl Neg for &AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self.scaled(-1.0)
    }
}

impl Neg for AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &AmbientVector {
    type Output = AmbientVector;
    fn mul(self, rhs: f64) -> AmbientVector {
        self.scaled(rhs)
    }
}

impl Mul<f64> for AmbientVector {
    type Output = AmbientVector;
    fn mul(self, rhs: f64) -> AmbientVector {
        self.scaled(rhs)
    }
}

/// A point of the unit sphere `S^{2n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    position: AmbientVector,
}

impl SpherePoint {
    pub fn new(position: AmbientVector, unit_tol: f64) -> Result<Self> {
        let defect = position.norm() - 1.0;
        if !(defect.abs() <= unit_tol) {
            return Err(GeometryError::NotUnit { defect });
        }
        Ok(Self { position })
    }

    /// Normalizes `v`; fails only on the zero vector.
    pub fn normalized(v: &AmbientVector) -> Result<Self> {
        let r = v.norm();
        if r == 0.0 {
            return Err(GeometryError::Domain("cannot normalize the zero vector".into()));
        }
        Ok(Self {
            position: v.scaled(1.0 / r),
        })
    }

    pub fn position(&self) -> &AmbientVector {
        &self.position
    }

    pub fn n(&self) -> usize {
        self.position.n()
    }
}

/// Hopf vector field `ξ(p) = -Ĵp`.
pub fn hopf_vector_field(p: &SpherePoint) -> AmbientVector {
    -p.position().j_apply()
}

/// Hopf vector field at an arbitrary ambient vector, checking `|p| = 1`.
pub fn hopf_vector_field_at(p: &AmbientVector, unit_tol: f64) -> Result<AmbientVector> {
    Ok(hopf_vector_field(&SpherePoint::new(p.clone(), unit_tol)?))
}

/// Orthogonal projection onto `T_p S^{2n+1}`: `v - <v,p> p`.
pub fn sphere_tangent_project(p: &SpherePoint, v: &AmbientVector) -> Result<AmbientVector> {
    let pos = p.position();
    let radial = v.try_dot(pos)?;
    let mut out = v.clone();
    out.axpy(-radial, pos);
    Ok(out)
}

/// `<v, ξ(p)>`: zero exactly when the sphere-tangent vector `v` is horizontal.
pub fn horizontality_defect(p: &SpherePoint, v: &AmbientVector, tangent_tol: f64) -> Result<f64> {
    let radial = v.try_dot(p.position())?;
    if !(radial.abs() <= tangent_tol * v.norm().max(1.0)) {
        return Err(GeometryError::NotTangent { defect: radial });
    }
    Ok(v.dot(&hopf_vector_field(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> AmbientVector {
        AmbientVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn j_rotates_first_pair() {
        assert_eq!(v(&[1.0, 0.0, 0.0, 0.0]).j_apply(), v(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn j_squares_to_minus_identity() {
        let x = v(&[0.3, -1.2, 0.5, 2.0]);
        assert_eq!(x.j_apply().j_apply(), -&x);
    }

    #[test]
    fn rejects_odd_or_short_coordinates() {
        assert_eq!(AmbientVector::new(vec![1.0, 2.0, 3.0]), Err(GeometryError::BadLength(3)));
        assert_eq!(AmbientVector::new(vec![1.0, 2.0]), Err(GeometryError::BadLength(2)));
        assert!(matches!(
            AmbientVector::new(vec![f64::NAN, 0.0, 0.0, 0.0]),
            Err(GeometryError::NonFinite(_))
        ));
        assert!(j_apply(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn mismatched_dot_is_structural_error() {
        let a = AmbientVector::zeros(1);
        let b = AmbientVector::zeros(2);
        assert!(matches!(a.try_dot(&b), Err(GeometryError::Dimension { .. })));
    }

    #[test]
    fn hopf_field_at_first_axis() {
        let p = SpherePoint::new(v(&[1.0, 0.0, 0.0, 0.0]), 1e-10).unwrap();
        assert_eq!(hopf_vector_field(&p), v(&[0.0, -1.0, 0.0, 0.0]));
    }

    #[test]
    fn hopf_field_rejects_non_unit_point() {
        let err = hopf_vector_field_at(&v(&[2.0, 0.0, 0.0, 0.0]), 1e-10).unwrap_err();
        assert_eq!(err, GeometryError::NotUnit { defect: 1.0 });
    }

    #[test]
    fn projection_kills_radial_part_and_fixes_tangent() {
        let p = SpherePoint::new(v(&[0.6, 0.0, 0.8, 0.0]), 1e-12).unwrap();
        let radial = sphere_tangent_project(&p, p.position()).unwrap();
        assert!(radial.norm() < 1e-15);
        let t = v(&[0.8, 0.3, -0.6, 0.1]);
        assert!((&sphere_tangent_project(&p, &t).unwrap() - &t).norm() < 1e-15);
    }

    #[test]
    fn horizontality_of_vertical_and_zero_vectors() {
        let p = SpherePoint::new(v(&[0.6, 0.0, 0.8, 0.0]), 1e-12).unwrap();
        let xi = hopf_vector_field(&p);
        assert!((horizontality_defect(&p, &xi, 1e-10).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(horizontality_defect(&p, &AmbientVector::zeros(1), 1e-10).unwrap(), 0.0);
        let radial = p.position().clone();
        assert!(matches!(
            horizontality_defect(&p, &radial, 1e-10),
            Err(GeometryError::NotTangent { .. })
        ));
    }
}
