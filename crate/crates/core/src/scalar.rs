//! Floating point scalar abstraction shared by every numeric routine in the crate.

use std::fmt;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar used for evaluation: `f32` or `f64`.
pub trait Scalar:
    Float
    + NumAssign
    + FloatConst
    + FromPrimitive
    + nalgebra::Scalar
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
{
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Widening conversion used for error reports and expression literals.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub(crate) fn to_f64_vec<T: Scalar>(p: &[T]) -> Vec<f64> {
    p.iter().map(|x| x.to_f64_lossy()).collect()
}
