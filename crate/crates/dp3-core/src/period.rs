//! The period problem: the two real residuals `xi1`, `xi2`, the lattice
//! vector `v2`, and the search for `(lambda1, lambda2)` with `xi1 = xi2 = 0`.
//!
//! All three quantities are real integrals over intervals of the real axis
//! whose integrands carry inverse square-root singularities at both ends.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{derive_constants, DerivedConstants, FamilyParams};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_endpoint_singular, QuadratureResult, SingularIntegral};
use crate::scalar::Real;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;
/// Relative offset `lambda2 = lambda1 (1 + C2_START)` where the search for
/// a zero of `xi2` starts.
pub const C2_START: f64 = 1e-6;
/// The `lambda2` search gives up beyond `C2_CAP * lambda1`.
pub const C2_CAP: f64 = 1e6;
pub const SCAN_POINTS: usize = 64;
pub const SCAN_MIN_OFFSET: f64 = 1e-4;
pub const SCAN_MAX: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodOptions<T> {
    /// Target for `|xi1|` and `|xi2|`.
    pub tol: T,
    /// Absolute target of every interval quadrature.
    pub quad_tol: T,
}

impl<T: Real> Default for PeriodOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(DEFAULT_TOL), quad_tol: T::lit(DEFAULT_QUAD_TOL) }
    }
}

impl<T: Real> PeriodOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { tol, quad_tol: (tol * T::lit(1e-2)).min(T::lit(DEFAULT_QUAD_TOL)) }
    }
}

/// `xi1 = integral_1^l1 of t (A t^2 + B) / ((t^2 - a^2) sqrt((t^2 - l^2)(t^2 - 1)(l1^2 - t^2)(l2^2 - t^2)))`
/// with `A = 1 - l - l1 + l2`, `B = l l1 - l l2 - l1 l2 + l l1 l2`.
pub fn eval_xi1<T: Real>(params: &FamilyParams<T>, quad_tol: T) -> Result<QuadratureResult<T, T>> {
    let k = derive_constants(params)?;
    let (l, l1, l2) = (params.lambda, params.lambda1, params.lambda2);
    let one = T::one();
    let big_a = one - l - l1 + l2;
    let big_b = l * l1 - l * l2 - l1 * l2 + l * l1 * l2;
    let a2 = k.a2();
    let spec = SingularIntegral::new(one, l1, quad_tol, move |t: T, dl: T, dh: T| {
        let t2 = t * t;
        let root = ((t2 - l * l) * dl * (t + one) * dh * (l1 + t) * (l2 * l2 - t2)).sqrt();
        t * (big_a * t2 + big_b) / ((t2 - a2) * root)
    });
    integrate_endpoint_singular(&spec)
}

/// `xi2 = integral_l1^l2 of (t^2 - b^2) / sqrt((t^2 - l^2)(t^2 - 1)(t^2 - l1^2)(l2^2 - t^2))`.
pub fn eval_xi2<T: Real>(params: &FamilyParams<T>, quad_tol: T) -> Result<QuadratureResult<T, T>> {
    let k = derive_constants(params)?;
    let (l, l1, l2) = (params.lambda, params.lambda1, params.lambda2);
    let b = k.b;
    let one = T::one();
    let spec = SingularIntegral::new(l1, l2, quad_tol, move |t: T, dl: T, dh: T| {
        let root = ((t * t - l * l) * (t * t - one) * dl * (t + l1) * dh * (l2 + t)).sqrt();
        (t - b) * (t + b) / root
    });
    integrate_endpoint_singular(&spec)
}

/// `v2 = 2 integral_l^1 of (b^2 - t^2) / sqrt((t^2 - l^2)(1 - t^2)(l1^2 - t^2)(l2^2 - t^2))`.
pub fn eval_v2<T: Real>(params: &FamilyParams<T>, quad_tol: T) -> Result<QuadratureResult<T, T>> {
    let k = derive_constants(params)?;
    let (l, l1, l2) = (params.lambda, params.lambda1, params.lambda2);
    let b = k.b;
    let one = T::one();
    let spec = SingularIntegral::new(l, one, quad_tol, move |t: T, dl: T, dh: T| {
        let root = (dl * (t + l) * dh * (one + t) * (l1 * l1 - t * t) * (l2 * l2 - t * t)).sqrt();
        (b - t) * (b + t) / root
    });
    let mut r = integrate_endpoint_singular(&spec)?;
    r.value = r.value + r.value;
    r.error_estimate = r.error_estimate + r.error_estimate;
    if !(r.value > T::zero()) {
        return Err(Error::NonPositive(r.value.to_f64_lossy()));
    }
    Ok(r)
}

fn xi2_at<T: Real>(lambda: T, lambda1: T, lambda2: T, quad_tol: T) -> Result<T> {
    Ok(eval_xi2(&FamilyParams::new(lambda, lambda1, lambda2)?, quad_tol)?.value)
}

/// Root of `lambda2 -> xi2(lambda, lambda1, lambda2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C2Root<T> {
    pub lambda2: T,
    pub xi2: T,
    /// Further sign-change brackets beyond the returned root, when requested.
    pub further_brackets: Vec<(T, T)>,
}

/// Bisects `f` on `[lo, hi]` with `f(lo) > 0 > f(hi)` until `|f| < tol` or
/// the bracket cannot be split further.
fn bisect<T: Real, F: FnMut(T) -> Result<T>>(mut f: F, mut lo: T, mut hi: T, tol: T) -> Result<(T, T)> {
    let mut best = (lo, T::infinity());
    loop {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            return Ok(best);
        }
        let v = f(mid)?;
        if v.abs() < best.1.abs() {
            best = (mid, v);
        }
        if v.abs() < tol {
            return Ok((mid, v));
        }
        if v > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Smallest `lambda2 > lambda1` with `xi2 = 0`, found by doubling the offset
/// `lambda2 - lambda1` from `lambda1 * 1e-6` until `xi2 < 0`, then bisecting.
///
/// With `scan_all`, the doubling continues up to the cap and every further
/// sign change is reported in [`C2Root::further_brackets`].
pub fn solve_lambda2_on_c2<T: Real>(lambda: T, lambda1: T, opts: &PeriodOptions<T>, scan_all: bool) -> Result<C2Root<T>> {
    let cap = T::lit(C2_CAP) * lambda1;
    let two = T::lit(2.0);
    let mut offset = lambda1 * T::lit(C2_START);
    let mut lo = lambda1 + offset;
    if !(xi2_at(lambda, lambda1, lo, opts.quad_tol)? > T::zero()) {
        return Err(Error::BracketFailure(lo.to_f64_lossy()));
    }
    let hi = loop {
        offset = offset * two;
        let hi = lambda1 + offset;
        if hi > cap {
            return Err(Error::BracketFailure(cap.to_f64_lossy()));
        }
        let f_hi = xi2_at(lambda, lambda1, hi, opts.quad_tol)?;
        if f_hi < T::zero() {
            break hi;
        }
        lo = hi;
    };
    let (lambda2, xi2) = bisect(|x| xi2_at(lambda, lambda1, x, opts.quad_tol), lo, hi, opts.tol)?;

    let mut further_brackets = Vec::new();
    if scan_all {
        let mut prev = (hi, T::lit(-1.0));
        let mut off = hi - lambda1;
        loop {
            off = off * two;
            let x = lambda1 + off;
            if x > cap {
                break;
            }
            let v = xi2_at(lambda, lambda1, x, opts.quad_tol)?;
            if (v > T::zero()) != (prev.1 > T::zero()) {
                further_brackets.push((prev.0, x));
            }
            prev = (x, v);
        }
    }
    Ok(C2Root { lambda2, xi2, further_brackets })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodResiduals<T> {
    pub xi1: T,
    pub xi2: T,
    pub xi1_error: T,
    pub xi2_error: T,
}

/// Horizontal periods `v1 = (pi/a, 0, 0)` and `v2 = (0, v2y, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lattice<T> {
    pub v1x: T,
    pub v2y: T,
}

impl<T: Real> Lattice<T> {
    pub fn new(params: &FamilyParams<T>, consts: &DerivedConstants<T>, quad_tol: T) -> Result<Self> {
        Ok(Self { v1x: T::PI() / consts.a, v2y: eval_v2(params, quad_tol)?.value })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult<T> {
    pub params: FamilyParams<T>,
    pub constants: DerivedConstants<T>,
    pub residuals: PeriodResiduals<T>,
    pub lattice: Lattice<T>,
    pub tol: T,
    /// Sign-change brackets of `xi2` beyond the chosen `lambda2`.
    pub further_c2_brackets: Vec<(T, T)>,
}

impl<T: Real> SolveResult<T> {
    /// Re-evaluates both residuals at `params` with the given options.
    pub fn at(params: FamilyParams<T>, opts: &PeriodOptions<T>) -> Result<Self> {
        let constants = derive_constants(&params)?;
        let x1 = eval_xi1(&params, opts.quad_tol)?;
        let x2 = eval_xi2(&params, opts.quad_tol)?;
        Ok(Self {
            params,
            constants,
            residuals: PeriodResiduals {
                xi1: x1.value,
                xi2: x2.value,
                xi1_error: x1.error_estimate,
                xi2_error: x2.error_estimate,
            },
            lattice: Lattice::new(&params, &constants, opts.quad_tol)?,
            tol: opts.tol,
            further_c2_brackets: Vec::new(),
        })
    }
}

/// `F(lambda1) = xi1(lambda, lambda1, lambda2*(lambda1))` along the zero set of `xi2`.
pub fn xi1_along_c2<T: Real>(lambda: T, lambda1: T, opts: &PeriodOptions<T>) -> Result<(T, T)> {
    let inner = PeriodOptions { tol: opts.tol * T::lit(0.1), quad_tol: opts.quad_tol };
    let root = solve_lambda2_on_c2(lambda, lambda1, &inner, false)?;
    let params = FamilyParams::new(lambda, lambda1, root.lambda2)?;
    Ok((eval_xi1(&params, opts.quad_tol)?.value, root.lambda2))
}

/// Scan points `lambda1 = 1 + d` with `d` geometric from `1e-4` to `1e3 - 1`.
pub fn lambda1_scan_grid<T: Real>() -> Vec<T> {
    let lo = SCAN_MIN_OFFSET.ln();
    let hi = (SCAN_MAX - 1.0).ln();
    (0..SCAN_POINTS)
        .map(|i| T::lit(1.0 + (lo + (hi - lo) * i as f64 / (SCAN_POINTS - 1) as f64).exp()))
        .collect()
}

/// Solves `xi1 = xi2 = 0` for fixed `lambda`.
///
/// Scans `F` over [`lambda1_scan_grid`] until its first sign change, then
/// bisects in `lambda1`. The `lambda2` of every evaluation is the smallest
/// zero of `xi2` ([`solve_lambda2_on_c2`]).
pub fn solve_period_problem<T: Real>(lambda: T, opts: &PeriodOptions<T>) -> Result<SolveResult<T>> {
    if !(lambda > T::zero() && lambda < T::one()) {
        return Err(Error::InvalidParams(format!("lambda = {lambda} is outside (0, 1)")));
    }
    let grid = lambda1_scan_grid::<T>();
    let mut scanned: Vec<(f64, f64)> = Vec::new();
    let mut bracket = None;
    let mut prev: Option<(T, T)> = None;
    for &l1 in &grid {
        let (f, _) = xi1_along_c2(lambda, l1, opts)?;
        scanned.push((l1.to_f64_lossy(), f.to_f64_lossy()));
        if let Some((pl, pf)) = prev {
            if pf > T::zero() && f <= T::zero() {
                bracket = Some((pl, l1));
                break;
            }
        }
        prev = Some((l1, f));
    }
    let Some((lo, hi)) = bracket else {
        return Err(Error::NoSignChange(scanned));
    };
    let (lambda1, _) = bisect(|x| Ok(xi1_along_c2(lambda, x, opts)?.0), lo, hi, opts.tol)?;
    let inner = PeriodOptions { tol: opts.tol * T::lit(0.1), quad_tol: opts.quad_tol };
    let root = solve_lambda2_on_c2(lambda, lambda1, &inner, true)?;
    let params = FamilyParams::new(lambda, lambda1, root.lambda2)?;
    let mut result = SolveResult::at(params, opts)?;
    result.further_c2_brackets = root.further_brackets;
    Ok(result)
}

/// Sampling of the `(lambda1, lambda2)` region: `lambda1 - 1` and
/// `lambda2 / lambda1 - 1` both geometric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub n_lambda1: usize,
    pub n_ratio: usize,
    pub lambda1_offset: (f64, f64),
    pub ratio: (f64, f64),
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n_lambda1: 64, n_ratio: 64, lambda1_offset: (1e-4, 39.0), ratio: (1e-3, 39.0) }
    }
}

fn geometric(n: usize, (lo, hi): (f64, f64)) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignSample<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub sign_xi1: i8,
    pub sign_xi2: i8,
}

/// Signs of `xi1`, `xi2` on a grid; rows are indexed by `lambda1`, columns by
/// the ratio `lambda2 / lambda1`, samples stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignField<T> {
    pub lambda: T,
    pub n_lambda1: usize,
    pub n_ratio: usize,
    pub samples: Vec<SignSample<T>>,
}

fn sign<T: Real>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}

pub fn sign_field<T: Real>(lambda: T, grid: &GridSpec, quad_tol: T) -> Result<SignField<T>> {
    if grid.n_lambda1 == 0 || grid.n_ratio == 0 || grid.lambda1_offset.0 <= 0.0 || grid.ratio.0 <= 0.0 {
        return Err(Error::Parameter(format!("invalid sign-field grid {grid:?}")));
    }
    let offsets = geometric(grid.n_lambda1, grid.lambda1_offset);
    let ratios = geometric(grid.n_ratio, grid.ratio);
    let points: Vec<(T, T)> = offsets
        .iter()
        .flat_map(|&d| {
            let l1 = T::lit(1.0 + d);
            ratios.iter().map(move |&r| (l1, l1 * T::lit(1.0 + r)))
        })
        .collect();
    let samples = points
        .par_iter()
        .map(|&(l1, l2)| {
            let p = FamilyParams::new(lambda, l1, l2)?;
            Ok(SignSample {
                lambda1: l1,
                lambda2: l2,
                sign_xi1: sign(eval_xi1(&p, quad_tol)?.value),
                sign_xi2: sign(eval_xi2(&p, quad_tol)?.value),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SignField { lambda, n_lambda1: grid.n_lambda1, n_ratio: grid.n_ratio, samples })
}

impl<T: Real> SignField<T> {
    pub fn row(&self, i: usize) -> &[SignSample<T>] {
        &self.samples[i * self.n_ratio..(i + 1) * self.n_ratio]
    }

    /// `xi2 > 0` along the column closest to `lambda2 = lambda1`.
    pub fn xi2_positive_near_diagonal(&self) -> bool {
        (0..self.n_lambda1).all(|i| self.row(i)[0].sign_xi2 > 0)
    }

    /// `xi2 < 0` along the column of largest `lambda2 / lambda1`.
    pub fn xi2_negative_far(&self) -> bool {
        (0..self.n_lambda1).all(|i| self.row(i)[self.n_ratio - 1].sign_xi2 < 0)
    }

    /// Sign of `xi1` just past the first `+ -> -` change of `xi2` in each row.
    pub fn xi1_on_c2(&self) -> Vec<Option<i8>> {
        (0..self.n_lambda1)
            .map(|i| {
                let row = self.row(i);
                row.windows(2).find(|w| w[0].sign_xi2 > 0 && w[1].sign_xi2 <= 0).map(|w| w[1].sign_xi1)
            })
            .collect()
    }

    /// Some row has `xi1` of both signs.
    pub fn xi1_changes_sign(&self) -> bool {
        let has = |s: i8| self.samples.iter().any(|x| x.sign_xi1 == s);
        has(1) && has(-1)
    }

    /// The sign of `xi1` on the zero set of `xi2` flips between rows, so the
    /// two zero-level curves cross.
    pub fn zero_curves_intersect(&self) -> bool {
        let along: Vec<i8> = self.xi1_on_c2().into_iter().flatten().collect();
        along.windows(2).any(|w| w[0] != w[1])
    }
}

/// A limit approached along a sequence of offsets `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCheck {
    pub name: &'static str,
    pub target: f64,
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub decreasing: bool,
}

impl LimitCheck {
    fn new(name: &'static str, target: f64, offsets: Vec<f64>, values: Vec<f64>) -> Self {
        let errors: Vec<f64> = values.iter().map(|v| (v - target).abs()).collect();
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        Self { name, target, offsets, values, errors, decreasing }
    }

    pub fn final_relative_error(&self) -> f64 {
        self.errors.last().copied().unwrap_or(f64::NAN) / self.target.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub lambda: f64,
    /// `xi1(lambda, 1 + h, l2)` for `lambda * l2 > 1`.
    pub xi1_near_one: LimitCheck,
    /// `xi2(lambda, l1, l1 + h) / h`.
    pub xi2_diagonal_slope: LimitCheck,
    /// `xi2(lambda, l1, l1 + 1e-6)`.
    pub xi2_at_tiny_offset: f64,
    /// `xi2(lambda, 1 + h, l2)` for `lambda * l2 <= 1`.
    pub xi2_near_one: LimitCheck,
}

pub const ASYMPTOTIC_OFFSETS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// `pi/2 ((l2 - l) / sqrt((1 - l^2)(l2^2 - 1)) - 1)`, the limit of `xi1` as `lambda1 -> 1`.
pub fn xi1_limit_near_one(lambda: f64, lambda2: f64) -> f64 {
    let l = lambda;
    std::f64::consts::FRAC_PI_2 * ((lambda2 - l) / ((1.0 - l * l) * (lambda2 * lambda2 - 1.0)).sqrt() - 1.0)
}

/// `(1 - l) l1 pi / (2 (l1^2 - l) sqrt((l1^2 - l^2)(l1^2 - 1)))`, the slope of
/// `xi2` in `lambda2` at `lambda2 = lambda1`.
pub fn xi2_diagonal_slope(lambda: f64, lambda1: f64) -> f64 {
    let (l, m2) = (lambda, lambda1 * lambda1);
    (1.0 - l) * lambda1 * std::f64::consts::PI / (2.0 * (m2 - l) * ((m2 - l * l) * (m2 - 1.0)).sqrt())
}

/// `integral_1^l2 dt / sqrt((t^2 - l^2)(l2^2 - t^2))`, the limit of `xi2` as
/// `lambda1 -> 1` when `lambda * lambda2 <= 1`.
pub fn xi2_limit_near_one(lambda: f64, lambda2: f64, quad_tol: f64) -> Result<f64> {
    let spec = SingularIntegral::new(1.0, lambda2, quad_tol, |t: f64, _dl: f64, dh: f64| {
        1.0 / ((t * t - lambda * lambda) * dh * (lambda2 + t)).sqrt()
    });
    Ok(integrate_endpoint_singular(&spec)?.value)
}

/// Compares `xi1`, `xi2` near the edges of the parameter region with their
/// closed-form limits. Uses `lambda2 = 1.5 / lambda` for the `xi1` limit,
/// `lambda1 = 2` for the slope and `lambda2 = 0.95 / lambda` for the `xi2` limit.
pub fn asymptotic_checks(lambda: f64, quad_tol: f64) -> Result<AsymptoticReport> {
    let hs = ASYMPTOTIC_OFFSETS.to_vec();

    let l2 = 1.5 / lambda;
    let values = hs
        .iter()
        .map(|&h| Ok(eval_xi1(&FamilyParams::new(lambda, 1.0 + h, l2)?, quad_tol)?.value))
        .collect::<Result<Vec<_>>>()?;
    let xi1_near_one = LimitCheck::new("xi1 as lambda1 -> 1", xi1_limit_near_one(lambda, l2), hs.clone(), values);

    let l1 = 2.0;
    let values = hs
        .iter()
        .map(|&h| Ok(eval_xi2(&FamilyParams::new(lambda, l1, l1 + h)?, quad_tol)?.value / h))
        .collect::<Result<Vec<_>>>()?;
    let xi2_diagonal_slope = LimitCheck::new("xi2 slope at lambda2 = lambda1", xi2_diagonal_slope(lambda, l1), hs.clone(), values);
    let xi2_at_tiny_offset = eval_xi2(&FamilyParams::new(lambda, l1, l1 + 1e-6)?, quad_tol)?.value;

    let l2 = 0.95 / lambda;
    let values = hs
        .iter()
        .map(|&h| Ok(eval_xi2(&FamilyParams::new(lambda, 1.0 + h, l2)?, quad_tol)?.value))
        .collect::<Result<Vec<_>>>()?;
    let xi2_near_one = LimitCheck::new("xi2 as lambda1 -> 1", xi2_limit_near_one(lambda, l2, quad_tol)?, hs, values);

    Ok(AsymptoticReport { lambda, xi1_near_one, xi2_diagonal_slope, xi2_at_tiny_offset, xi2_near_one })
}
