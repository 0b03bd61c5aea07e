//! Floating-point abstraction shared by the distribution and estimator code.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar usable by the generic parts of the crate (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `(exp(a*x) - 1) / x`, continuous at `x = 0` where it equals `a`.
#[inline]
pub(crate) fn expm1_ratio<T: Real>(a: T, x: T) -> T {
    if x == T::zero() {
        a
    } else {
        (a * x).exp_m1() / x
    }
}
