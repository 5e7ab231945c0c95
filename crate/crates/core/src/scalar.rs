//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Real floating-point scalar: `f32` or `f64`.
///
/// All transforms, functionals and solvers are written against this trait.
/// The tolerances quoted throughout the docs assume `f64`; for `f32` the
/// internal checks are floored at a small multiple of machine epsilon
/// (see [`Real::tol`]).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A tolerance of `x`, floored at 1024 ulps so that `f64`-calibrated
    /// thresholds stay meaningful in single precision.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::of(x).max(Self::epsilon() * Self::of(1024.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `C = ‖cos θ‖₂ = √(4π/3)` on the unit sphere.
#[inline]
pub fn cos_theta_norm<T: Real>() -> T {
    (T::of(4.0) * T::PI() / T::of(3.0)).sqrt()
}
