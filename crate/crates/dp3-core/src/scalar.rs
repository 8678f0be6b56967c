//! Scalar abstraction shared by the numerical kernels.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// Every kernel in the crate is written against this trait. Tolerances are
/// given as `f64` literals and converted with [`Real::lit`], so `f32`
/// instantiations only make sense with correspondingly loose tolerances.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal; saturates instead of failing.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest weight the double-exponential rule still keeps.
    fn weight_floor() -> Self;
}

impl Real for f32 {
    fn weight_floor() -> Self {
        1e-30
    }
}

impl Real for f64 {
    fn weight_floor() -> Self {
        1e-300
    }
}

pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
