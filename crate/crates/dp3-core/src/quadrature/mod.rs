//! Real-interval and contour quadrature.

pub mod contour;
pub mod gauss_kronrod;
pub mod tanh_sinh;

pub use contour::{integrate_contour, ContourOptions, ContourResult};
pub use tanh_sinh::{integrate_endpoint_singular, SingularIntegral};

/// Value, error estimate and integrand evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<V, T> {
    pub value: V,
    pub error_estimate: T,
    pub evaluations: usize,
}
