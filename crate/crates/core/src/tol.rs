//! Named tolerances used by the check suite and the invariants.
//!
//! Everything here is an `f64` absolute tolerance. Validation tolerances for
//! the metric axioms live on [`crate::scalar::Real`] because they scale with
//! the scalar; these do not: checks and reports always run in `f64`.

/// Slack allowed when asserting a proved inequality `lhs ≤ rhs`: rounding in
/// the two sides' independent computations, nothing more.
pub const CHECK_SLACK: f64 = 1e-9;

/// Re-evaluating a defining ratio at a returned witness must reproduce the
/// reported value this tightly (pure float rounding).
pub const WITNESS_RECHECK: f64 = 1e-12;

/// Residual bound for the Jacobi eigensolver: `‖Lv − λv‖∞`.
pub const EIGEN_RESIDUAL: f64 = 1e-8;

/// Agreement between the spectral gap and the Rayleigh quotient of the
/// returned eigenvector.
pub const RAYLEIGH_AGREEMENT: f64 = 1e-6;

/// A mean-zero witness may carry this much numerical mean.
pub const MEAN_ZERO: f64 = 1e-10;

/// A shrunk function may exceed its Lipschitz budget by this much.
pub const LIP_EXCESS: f64 = 1e-12;
