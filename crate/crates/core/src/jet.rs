//! Truncated Taylor arithmetic.
//!
//! A jet of order `r` stores the normalized Taylor coefficients
//! `c_k = f^(k)(s) / k!` for `k = 0..=r`. Products truncate to the lower
//! order of the two operands, and differentiation drops one order, so a
//! quantity built from a curve jet carries exactly as many derivatives as
//! the input supports.

use crate::ambient::AmbientVector;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet {
    coeffs: Vec<f64>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl ScalarJet {
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "jet needs at least the value");
        Self { coeffs }
    }

    /// Builds a jet from the derivatives `f, f', f'', ...`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        Self::from_coeffs(
            derivs
                .iter()
                .enumerate()
                .map(|(k, d)| d / factorial(k))
                .collect(),
        )
    }

    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `k`-th derivative at the expansion point, if the jet carries it.
    pub fn derivative(&self, k: usize) -> Option<f64> {
        self.coeffs.get(k).map(|c| c * factorial(k))
    }

    pub fn truncated(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec())
    }

    /// Jet of `f'`, one order lower.
    pub fn differentiate(&self) -> Self {
        assert!(self.order() >= 1, "cannot differentiate an order-0 jet");
        Self::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| (k + 1) as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = self.order().min(other.order());
        Self::from_coeffs((0..=r).map(|k| self.coeffs[k] + other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let r = self.order().min(other.order());
        Self::from_coeffs((0..=r).map(|k| self.coeffs[k] - other.coeffs[k]).collect())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add_constant(&self, value: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.order().min(other.order());
        Self::from_coeffs(
            (0..=r)
                .map(|k| (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum())
                .collect(),
        )
    }

    /// `1/f`; the value must be nonzero.
    pub fn recip(&self) -> Self {
        let a0 = self.coeffs[0];
        assert!(a0 != 0.0, "reciprocal of a jet with zero value");
        let mut b = Vec::with_capacity(self.coeffs.len());
        b.push(1.0 / a0);
        for k in 1..self.coeffs.len() {
            let s: f64 = (1..=k).map(|j| self.coeffs[j] * b[k - j]).sum();
            b.push(-s / a0);
        }
        Self::from_coeffs(b)
    }

    /// `sqrt(f)`; the value must be positive.
    pub fn sqrt(&self) -> Self {
        let a0 = self.coeffs[0];
        assert!(a0 > 0.0, "square root of a jet with non-positive value");
        let b0 = a0.sqrt();
        let mut b = Vec::with_capacity(self.coeffs.len());
        b.push(b0);
        for k in 1..self.coeffs.len() {
            let s: f64 = (1..k).map(|j| b[j] * b[k - j]).sum();
            b.push((self.coeffs[k] - s) / (2.0 * b0));
        }
        Self::from_coeffs(b)
    }
}

/// Jet of a curve in `R^{2n+2}` (or of a vector field along one).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorJet {
    coeffs: Vec<AmbientVector>,
}

impl VectorJet {
    pub fn from_coeffs(coeffs: Vec<AmbientVector>) -> Self {
        assert!(!coeffs.is_empty(), "jet needs at least the value");
        Self { coeffs }
    }

    pub fn from_derivatives(derivs: &[AmbientVector]) -> Self {
        Self::from_coeffs(
            derivs
                .iter()
                .enumerate()
                .map(|(k, d)| d.scaled(1.0 / factorial(k)))
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> &AmbientVector {
        &self.coeffs[0]
    }

    pub fn derivative(&self, k: usize) -> Option<AmbientVector> {
        self.coeffs.get(k).map(|c| c.scaled(factorial(k)))
    }

    pub fn truncated(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn differentiate(&self) -> Self {
        assert!(self.order() >= 1, "cannot differentiate an order-0 jet");
        Self::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c.scaled((k + 1) as f64))
                .collect(),
        )
    }

    pub fn dot(&self, other: &Self) -> ScalarJet {
        let r = self.order().min(other.order());
        ScalarJet::from_coeffs(
            (0..=r)
                .map(|k| (0..=k).map(|j| self.coeffs[j].dot(&other.coeffs[k - j])).sum())
                .collect(),
        )
    }

    pub fn norm_sq(&self) -> ScalarJet {
        self.dot(self)
    }

    /// Pointwise product with a scalar function.
    pub fn scale_by(&self, f: &ScalarJet) -> Self {
        let r = self.order().min(f.order());
        let dim_n = self.coeffs[0].n();
        Self::from_coeffs(
            (0..=r)
                .map(|k| {
                    let mut acc = AmbientVector::zeros(dim_n);
                    for j in 0..=k {
                        acc.axpy(f.coeffs[k - j], &self.coeffs[j]);
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.scaled(factor)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let r = self.order().min(other.order());
        Self::from_coeffs((0..=r).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let r = self.order().min(other.order());
        Self::from_coeffs((0..=r).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn j_apply(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(AmbientVector::j_apply).collect())
    }
}
