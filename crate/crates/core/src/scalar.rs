use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar for all game quantities: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Sum + fmt::Debug + fmt::Display + 'static {
    /// Lossy conversion from `f64`, used for literals and tolerances.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 converts to any Scalar")
    }

    /// Default relative equality tolerance (1e-9).
    fn rel_tolerance() -> Self {
        Self::from_f64_lossy(1e-9)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `|a - b| <= tol * max(|a|, |b|)`, with an absolute fallback so that
/// values that are both (near) zero compare equal.
pub fn approx_eq_rel<T: Scalar>(a: T, b: T, tol: T) -> bool {
    let diff = (a - b).abs();
    let scale = a.abs().max(b.abs());
    diff <= tol * scale.max(T::one())
}
