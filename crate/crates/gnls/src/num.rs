//! Scalar abstraction. Everything numerical in this crate is generic over
//! [`Real`], which is satisfied by `f32` and `f64`.

use num_traits::{Float, FloatConst, NumAssign};
use rustfft::FftNum;

/// Floating-point scalar usable throughout the crate: real arithmetic,
/// transcendentals, FFTs, and thread-safe sharing.
pub trait Real:
    Float + FloatConst + NumAssign + FftNum + std::fmt::Display + std::iter::Sum
{
    /// Lossy conversion from `f64`, for literals and tolerances.
    fn of(x: f64) -> Self {
        num_traits::FromPrimitive::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a grid index or count.
    fn of_usize(x: usize) -> Self {
        num_traits::FromPrimitive::from_usize(x).expect("usize representable")
    }

    fn to_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type C<T> = num_complex::Complex<T>;
