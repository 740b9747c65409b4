//! Numerical study of intersecting a complex projective variety Z ⊂ Pⁿ with
//! moving linear subspaces L of complementary dimension.
//!
//! The crate computes the intersection condition number κ_Z(L, z) at each
//! point of Z ∩ L by three independent routes (tangent angles, the normal-form
//! N-matrix, and the distance to the local Schubert variety), verifies the
//! kernel/image sandwich bounds by finite differences, evaluates closed-form
//! volume and degree identities on Grassmannians, and estimates
//! condition-number tail probabilities by Monte Carlo against the first-order
//! tube-volume law around the Hurwitz hypersurface.

pub mod condition;
pub mod error;
pub mod grassmann;
pub mod intersect;
pub mod linalg;
pub mod roots;
pub mod tube;
pub mod variety;
pub mod volume;

pub use error::{Error, Result};
