//! Scalar abstraction for the numeric core.
//!
//! Everything geometric in this crate (distances, masses, concentration
//! values) is generic over a floating scalar so the same code runs in `f32`
//! or `f64`. The crate-root aliases fix `f64`, which is what the CLI and the
//! file formats use.

use std::fmt;
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating scalar used for distances, masses and all derived quantities.
///
/// The associated tolerances are absolute and scale with the precision of
/// the type: metric validation at `f32` cannot honestly demand `1e-12`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + AddAssign + Sum + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Absolute tolerance for the metric axioms (symmetry, triangle inequality).
    fn triangle_tol() -> Self;

    /// `|Σ weight − 1|` at or below this is accepted without touching the weights.
    fn mass_tol() -> Self;

    /// `|Σ weight − 1|` at or below this (but above [`Real::mass_tol`]) is
    /// repaired by renormalizing; anything larger is rejected.
    fn renorm_tol() -> Self;
}

impl Real for f64 {
    fn triangle_tol() -> Self {
        1e-12
    }
    fn mass_tol() -> Self {
        1e-12
    }
    fn renorm_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn triangle_tol() -> Self {
        1e-5
    }
    fn mass_tol() -> Self {
        1e-5
    }
    fn renorm_tol() -> Self {
        1e-3
    }
}

/// Shorthand for pulling an `f64` constant into the working scalar.
#[inline]
pub(crate) fn c<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the working scalar")
}

/// Lossy view of a scalar as `f64`, for error messages and reports.
#[inline]
pub(crate) fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
