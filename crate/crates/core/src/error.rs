//! Crate-wide error type.
//!
//! Ill-posedness (κ = ∞) is deliberately *not* an error: it is a valid answer
//! about the input and is reported through [`crate::condition::ConditionReport`].
//! Errors here mean the computation itself could not be carried out.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("SVD did not converge for a {rows}x{cols} matrix")]
    SvdFailed { rows: usize, cols: usize },

    #[error("eigenvalue computation failed for a {size}x{size} companion matrix")]
    EigenFailed { size: usize },

    #[error("operation undefined for the zero matrix")]
    ZeroMatrix,

    #[error("input is rank deficient: numerical rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("vector is not tangent at the base point (residual {residual:.3e})")]
    NotTangent { residual: f64 },

    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid variety: {0}")]
    InvalidVariety(String),

    #[error("point is not on the variety (residuals {residuals:?})")]
    PointNotOnVariety { residuals: Vec<f64> },

    #[error("point is not on the subspace (residual {residual:.3e})")]
    PointNotOnSubspace { residual: f64 },

    #[error("point is singular on the variety")]
    SingularPoint,

    #[error("nontransversal configuration: {0}")]
    Nontransversal(String),

    #[error("geodesic is not uniquely determined: {0}")]
    DegenerateGeodesic(String),

    #[error("intersection is positive-dimensional (the subspace lies in the ill-posed set)")]
    PositiveDimensional,

    #[error("Newton matrix is singular (nontransversal intersection)")]
    NewtonSingular,

    #[error("Newton iteration did not converge (last residual {residual:.3e})")]
    NewtonDiverged { residual: f64 },

    #[error("path tracking failed at t = {t:.6} (local condition estimate {kappa_estimate:.3e})")]
    PathFailure { t: f64, kappa_estimate: f64 },

    #[error("unsupported input combination: {0}")]
    Capability(String),

    #[error("solver failure rate too high: {failures} of {total} samples")]
    SolverFailureRate { failures: usize, total: usize },

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("exact identity violated: {0}")]
    ExactIdentity(String),
}
