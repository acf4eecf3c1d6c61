//! Numerical realization of biharmonic submanifold theory in odd-dimensional
//! spheres and complex projective space.
//!
//! Everything in `CP^n` is computed on horizontal lifts to the unit sphere
//! `S^{2n+1}` of `R^{2n+2}`, so the only ambient geometry implemented is the
//! round sphere together with the complex structure `Ĵ` and the Hopf vector
//! field `ξ(p) = -Ĵp`.
//!
//! Module map:
//!
//! * [`ambient`]: coordinates, `Ĵ`, `ξ`, sphere projections.
//! * [`jet`]: truncated Taylor arithmetic used to differentiate frames exactly.
//! * [`curves`]: curve jets, covariant derivatives and the Frenet apparatus.
//! * [`biharmonic`]: tension/bitension residuals and the Hopf-lift relation.
//! * [`families`]: explicit biharmonic curve lifts, the order-4 helix solver
//!   and the `CP^2` helix classifier.
//! * [`clifford`]: product submanifolds of Clifford tori, the tangent sphere
//!   bundle, Lagrangian tori and hypersurface predicates.

// Negated comparisons below are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambient;
pub mod biharmonic;
pub mod clifford;
pub mod curves;
pub mod error;
pub mod families;
pub mod jet;
pub mod roots;
pub mod tolerance;

pub use ambient::{AmbientVector, SpherePoint};
pub use error::{GeometryError, Result};
pub use tolerance::ToleranceConfig;
