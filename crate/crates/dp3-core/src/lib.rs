//! Numerical construction of a one-parameter family of embedded doubly
//! periodic genus-3 minimal surfaces.
//!
//! The numerical kernels ([`algebraic`], [`riemann`], [`quadrature`],
//! [`period`]) are generic over [`Real`]; mesh building and verification work
//! in `f64`. The aliases below fix the scalar for the common case.

pub mod algebraic;
pub mod cli;
pub mod error;
pub mod format;
pub mod path;
pub mod period;
pub mod quadrature;
pub mod riemann;
pub mod scalar;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Complex64 = C<f64>;
pub type Params = algebraic::FamilyParams<f64>;
pub type Constants = algebraic::DerivedConstants<f64>;
pub type Surface = riemann::RiemannSurface<f64>;
pub type Point = riemann::CurvePoint<f64>;
