//! Family parameters, the defining quartics and the constants `alpha`, `a`, `b`.
//!
//! The curve of the family is built from
//!
//! ```text
//! g1(z) = (z - l)(z + 1)(z - l1)(z + l2)
//! g2(z) = (z + l)(z - 1)(z + l1)(z - l2)
//! ```
//!
//! with `0 < l < 1 < l1 < l2`, and `g1 + g2 = 2 (z^2 - a^2)(z^2 - b^2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{real, Real, C};

/// Minimal gap kept between `1`, `lambda1` and `lambda2`.
pub const PARAM_MARGIN: f64 = 1e-12;

/// The triple `(lambda, lambda1, lambda2)` with `0 < lambda < 1 < lambda1 < lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParams<T> {
    pub lambda: T,
    pub lambda1: T,
    pub lambda2: T,
}

impl<T: Real> FamilyParams<T> {
    pub fn new(lambda: T, lambda1: T, lambda2: T) -> Result<Self> {
        let margin = T::lit(PARAM_MARGIN);
        let ok = lambda > T::zero()
            && lambda < T::one()
            && lambda1 - T::one() >= margin
            && lambda2 - lambda1 >= margin
            && lambda2.is_finite();
        if !ok {
            return Err(Error::InvalidParams(format!(
                "need 0 < lambda < 1 < lambda1 < lambda2, got ({lambda}, {lambda1}, {lambda2})"
            )));
        }
        Ok(Self { lambda, lambda1, lambda2 })
    }

    /// `alpha = l + l1 - l2 - l*l1 + l*l2 + l1*l2`.
    pub fn alpha(&self) -> T {
        let (l, l1, l2) = (self.lambda, self.lambda1, self.lambda2);
        l + l1 - l2 - l * l1 + l * l2 + l1 * l2
    }

    /// `lambda * lambda1 * lambda2`, the constant term of `g1` and `g2`.
    pub fn product(&self) -> T {
        self.lambda * self.lambda1 * self.lambda2
    }

    pub fn to_f64(&self) -> FamilyParams<f64> {
        FamilyParams {
            lambda: self.lambda.to_f64_lossy(),
            lambda1: self.lambda1.to_f64_lossy(),
            lambda2: self.lambda2.to_f64_lossy(),
        }
    }
}

/// Constants derived from [`FamilyParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants<T> {
    pub alpha: T,
    pub a: T,
    pub b: T,
    /// `alpha^2 - 4 lambda lambda1 lambda2`
    pub discriminant: T,
}

impl<T: Real> DerivedConstants<T> {
    pub fn a2(&self) -> T {
        self.a * self.a
    }

    pub fn b2(&self) -> T {
        self.b * self.b
    }
}

/// Closed forms for `alpha`, `a`, `b`.
///
/// `a^2` is taken as `2 l l1 l2 / (alpha + sqrt(disc))`, which avoids the
/// cancellation in `(alpha - sqrt(disc)) / 2` when `disc` is close to `alpha^2`.
pub fn derive_constants<T: Real>(params: &FamilyParams<T>) -> Result<DerivedConstants<T>> {
    let alpha = params.alpha();
    let p = params.product();
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let discriminant = alpha * alpha - four * p;
    if !(discriminant > T::zero()) {
        return Err(Error::Domain(discriminant.to_f64_lossy()));
    }
    let root = discriminant.sqrt();
    let b2 = (alpha + root) / two;
    let a2 = two * p / (alpha + root);
    Ok(DerivedConstants { alpha, a: a2.sqrt(), b: b2.sqrt(), discriminant })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quartic {
    G1,
    G2,
}

/// Evaluates `g1` or `g2` as a product of its four linear factors.
pub fn eval_g<T: Real>(which: Quartic, z: C<T>, params: &FamilyParams<T>) -> C<T> {
    let one = real(T::one());
    let (l, l1, l2) = (real(params.lambda), real(params.lambda1), real(params.lambda2));
    match which {
        Quartic::G1 => (z - l) * (z + one) * (z - l1) * (z + l2),
        Quartic::G2 => (z + l) * (z - one) * (z + l1) * (z - l2),
    }
}

/// `2 (z^2 - a^2)(z^2 - b^2)`, the factored form of `g1 + g2`.
pub fn eval_g_sum_factored<T: Real>(z: C<T>, consts: &DerivedConstants<T>) -> C<T> {
    let z2 = z * z;
    (z2 - real(consts.a2())) * (z2 - real(consts.b2())) * T::lit(2.0)
}

/// One identity of the form `disc - (alpha - c)^2 = rhs` with its expected sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub expected_sign: i8,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub left: f64,
    pub right: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbIdentityReport {
    pub identities: Vec<IdentityCheck>,
    pub inequalities: Vec<InequalityCheck>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Relative tolerance used for the polynomial identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Evaluates both sides of the four discriminant identities and the
/// ordering chain `0 < l < sqrt(l) < a < 1 < l1 < b < l2`.
pub fn check_ab_identities<T: Real>(params: &FamilyParams<T>) -> AbIdentityReport {
    let (l, l1, l2) = (params.lambda, params.lambda1, params.lambda2);
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let alpha = params.alpha();
    let disc = alpha * alpha - four * params.product();

    let sides: [(&'static str, T, T, T, i8); 4] = [
        ("disc-(alpha-2l)^2", two * l, -four * l * (one - l) * (l2 - l1), l.max(one), -1),
        ("disc-(alpha-2)^2", two, four * (one - l) * (l1 - one) * (one + l2), one, 1),
        (
            "disc-(alpha-2l1^2)^2",
            two * l1 * l1,
            four * l1 * (l1 - one) * (l + l1) * (l2 - l1),
            l1 * l1,
            1,
        ),
        (
            "disc-(alpha-2l2^2)^2",
            two * l2 * l2,
            -four * l2 * (l2 - l) * (one + l2) * (l2 - l1),
            l2 * l2,
            -1,
        ),
    ];

    let mut max_residual = 0.0f64;
    let identities: Vec<IdentityCheck> = sides
        .iter()
        .map(|&(name, c, rhs, _, sign)| {
            let shifted = alpha - c;
            let lhs = disc - shifted * shifted;
            // scale: magnitude of the cancelling terms
            let scale = (alpha * alpha).abs() + (shifted * shifted).abs() + one;
            let residual = ((lhs - rhs) / scale).abs().to_f64_lossy();
            max_residual = max_residual.max(residual);
            let sign_ok = if sign > 0 { rhs > T::zero() } else { rhs < T::zero() };
            IdentityCheck {
                name,
                lhs: lhs.to_f64_lossy(),
                rhs: rhs.to_f64_lossy(),
                residual,
                expected_sign: sign,
                pass: residual < IDENTITY_TOL && sign_ok,
            }
        })
        .collect();

    let inequalities = match derive_constants(params) {
        Ok(k) => {
            let chain = [
                ("0<lambda", T::zero(), l),
                ("lambda<sqrt(lambda)", l, l.sqrt()),
                ("sqrt(lambda)<a", l.sqrt(), k.a),
                ("a<1", k.a, one),
                ("1<lambda1", one, l1),
                ("lambda1<b", l1, k.b),
                ("b<lambda2", k.b, l2),
            ];
            chain
                .iter()
                .map(|&(name, left, right)| InequalityCheck {
                    name,
                    left: left.to_f64_lossy(),
                    right: right.to_f64_lossy(),
                    pass: left < right,
                })
                .collect()
        }
        Err(_) => vec![InequalityCheck { name: "disc>0", left: disc.to_f64_lossy(), right: 0.0, pass: false }],
    };

    let pass = identities.iter().all(|c| c.pass) && inequalities.iter().all(|c| c.pass);
    AbIdentityReport { identities, inequalities, max_residual, pass }
}
