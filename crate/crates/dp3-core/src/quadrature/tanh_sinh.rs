//! Double-exponential (tanh-sinh) rule for integrands with algebraic endpoint
//! singularities.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::QuadratureResult;

/// Levels always computed before the level-to-level difference is trusted.
pub const MIN_LEVELS: u32 = 3;
pub const MAX_LEVELS: u32 = 10;

/// `integral_lo^hi f(t) dt` for an `f` that may blow up like an inverse square
/// root at either end.
///
/// The integrand receives `(t, t - lo, hi - t)`; the two distances are
/// computed without cancellation, so factors such as `sqrt(t - lo)` stay
/// accurate right up to the end points.
pub struct SingularIntegral<T, F> {
    pub integrand: F,
    pub lo: T,
    pub hi: T,
    pub target_tol: T,
}

impl<T: Real, F: Fn(T, T, T) -> T> SingularIntegral<T, F> {
    pub fn new(lo: T, hi: T, target_tol: T, integrand: F) -> Self {
        Self { integrand, lo, hi, target_tol }
    }
}

/// Sum of `w_k f(t_k)` over the nodes `u = (offset + step * j)` for `j >= 0`
/// and their mirror images, truncated where the weight falls below
/// [`Real::weight_floor`] or the node reaches an end point.
fn sweep<T: Real, F: Fn(T, T, T) -> T>(spec: &SingularIntegral<T, F>, offset: T, step: T, evals: &mut usize) -> Result<T> {
    let half_width = (spec.hi - spec.lo) * T::lit(0.5);
    let half_pi = T::FRAC_PI_2();
    let two = T::lit(2.0);
    let floor = T::weight_floor();
    let mut sum = T::zero();
    let mut j = 0u32;
    loop {
        let u = offset + step * T::from_u32(j).unwrap_or_else(T::zero);
        j += 1;
        let v = half_pi * u.sinh();
        let e = (-two * v).exp();
        // 1 - tanh(v) and 1 + tanh(v)
        let near = half_width * two * e / (T::one() + e);
        let far = half_width * two / (T::one() + e);
        let cosh_v = v.cosh();
        let weight = half_width * half_pi * u.cosh() / (cosh_v * cosh_v);
        if !(weight >= floor) || near <= T::zero() {
            break;
        }
        let at_hi = (spec.integrand)(spec.hi - near, far, near);
        if !at_hi.is_finite() {
            return Err(Error::NoConvergence { estimate: f64::NAN, error: f64::INFINITY });
        }
        *evals += 1;
        sum = sum + weight * at_hi;
        if u == T::zero() {
            continue;
        }
        let at_lo = (spec.integrand)(spec.lo + near, near, far);
        if !at_lo.is_finite() {
            return Err(Error::NoConvergence { estimate: f64::NAN, error: f64::INFINITY });
        }
        *evals += 1;
        sum = sum + weight * at_lo;
    }
    Ok(sum)
}

/// Tanh-sinh quadrature with step halving until two consecutive levels agree
/// to `target_tol`.
pub fn integrate_endpoint_singular<T: Real, F: Fn(T, T, T) -> T>(
    spec: &SingularIntegral<T, F>,
) -> Result<QuadratureResult<T, T>> {
    if !(spec.lo < spec.hi) {
        return Err(Error::Parameter(format!("empty interval [{}, {}]", spec.lo, spec.hi)));
    }
    let mut evals = 0usize;
    let mut step = T::one();
    let mut raw = sweep(spec, T::zero(), step, &mut evals)?;
    let mut value = raw * step;
    let mut error = T::infinity();
    for level in 1..=MAX_LEVELS {
        step = step * T::lit(0.5);
        raw = raw + sweep(spec, step, step + step, &mut evals)?;
        let next = raw * step;
        error = (next - value).abs();
        value = next;
        if level >= MIN_LEVELS - 1 && error <= spec.target_tol {
            return Ok(QuadratureResult { value, error_estimate: error, evaluations: evals });
        }
    }
    Err(Error::NoConvergence { estimate: value.to_f64_lossy(), error: error.to_f64_lossy() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcsine_integral() {
        let spec = SingularIntegral::new(0.0, 1.0, 1e-12, |_t: f64, dl: f64, dh: f64| 1.0 / (dl * dh).sqrt());
        let r = integrate_endpoint_singular(&spec).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-10, "{}", r.value);
        assert!(r.error_estimate <= 1e-12);
    }

    #[test]
    fn regular_polynomial() {
        let spec = SingularIntegral::new(-1.0, 2.0, 1e-13, |t: f64, _, _| t * t);
        let r = integrate_endpoint_singular(&spec).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn first_kind_near_degenerate() {
        // K-type integral tending to pi / (2 l1) as l2 -> l1
        let (l1, l2) = (2.0f64, 2.0001f64);
        let spec = SingularIntegral::new(l1, l2, 1e-12, |t: f64, dl: f64, dh: f64| {
            1.0 / (dl * (t + l1) * dh * (l2 + t)).sqrt()
        });
        let r = integrate_endpoint_singular(&spec).unwrap();
        assert!((r.value - std::f64::consts::FRAC_PI_4).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn single_precision() {
        let spec = SingularIntegral::new(0.0f32, 1.0, 1e-5, |_t, dl: f32, dh: f32| 1.0 / (dl * dh).sqrt());
        let r = integrate_endpoint_singular(&spec).unwrap();
        assert!((r.value - std::f32::consts::PI).abs() < 1e-4);
    }

    #[test]
    fn reports_nonconvergence() {
        // interior pole
        let spec = SingularIntegral::new(0.0, 1.0, 1e-12, |t: f64, _, _| 1.0 / (t - 0.5).abs().sqrt());
        assert!(integrate_endpoint_singular(&spec).is_err());
    }

    #[test]
    fn rejects_empty_interval() {
        let spec = SingularIntegral::new(1.0, 1.0, 1e-12, |t: f64, _, _| t);
        assert!(matches!(integrate_endpoint_singular(&spec), Err(Error::Parameter(_))));
    }
}
