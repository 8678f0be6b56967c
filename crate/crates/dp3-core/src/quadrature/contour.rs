//! Integrals of `(phi1, phi2, phi3)` along paths on the curve.
//!
//! Each segment is integrated by adaptive GK15 on its parameter interval,
//! panels taken left to right so that `w` can be continued from node to node.

use crate::error::{Error, Result};
use crate::path::PathSegment;
use crate::riemann::{HomologyLoop, RiemannSurface};
use crate::scalar::{real, Real, C};

use super::gauss_kronrod::nodes;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions<T> {
    /// Relative tolerance on the whole path.
    pub tol: T,
    /// Minimal distance kept from the ends `z = +-a`.
    pub end_clearance: T,
    pub max_depth: u32,
}

impl<T: Real> Default for ContourOptions<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10), end_clearance: T::lit(1e-8), max_depth: 40 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourResult<T> {
    pub integrals: [C<T>; 3],
    pub error_estimate: T,
    pub evaluations: usize,
    /// `w` continued to the end of the path; `None` if the path ends at a
    /// singular point.
    pub end_w: Option<C<T>>,
}

struct SegmentSum<T> {
    value: [C<T>; 3],
    error: T,
    evals: usize,
    end_w: Option<C<T>>,
}

fn integrate_segment<T: Real, P: PathSegment<T>>(
    surface: &RiemannSurface<T>,
    seg: &P,
    w0: C<T>,
    opts: &ContourOptions<T>,
) -> Result<SegmentSum<T>> {
    let a = real(surface.consts.a);
    let zero = real(T::zero());
    let point = |s: T| seg.point(s);
    let mut stack = vec![(T::zero(), T::one(), 0u32)];
    let mut w = w0;
    let mut total = [zero; 3];
    let mut error = T::zero();
    let mut evals = 0usize;
    let mut end_w = Some(w0);
    while let Some((s0, s1, depth)) = stack.pop() {
        let mut wn = w;
        let mut prev = s0;
        let mut kron = [zero; 3];
        let mut gauss = [zero; 3];
        for (x, wk, wg) in nodes(s0, s1) {
            wn = surface.continue_along(point, prev, wn, x)?;
            prev = x;
            let z = seg.point(x);
            if (z - a).norm() < opts.end_clearance || (z + a).norm() < opts.end_clearance {
                return Err(Error::EndSingularity { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
            }
            let dz = seg.derivative(x);
            let f = surface.forms(z, wn);
            for k in 0..3 {
                let v = f[k] * dz;
                kron[k] = kron[k] + v * wk;
                gauss[k] = gauss[k] + v * wg;
            }
        }
        evals += 15;
        let err = (0..3).map(|k| (kron[k] - gauss[k]).norm()).fold(T::zero(), T::max);
        let mag = kron.iter().map(|v| v.norm()).fold(T::zero(), |s, x| s + x);
        if err <= opts.tol * ((s1 - s0) + mag) {
            for k in 0..3 {
                total[k] = total[k] + kron[k];
            }
            error = error + err;
            if seg.singular_end() && s1 == T::one() {
                end_w = None;
            } else {
                w = surface.continue_along(point, prev, wn, s1)?;
                end_w = Some(w);
            }
        } else if depth >= opts.max_depth {
            return Err(Error::NoConvergence { estimate: kron[0].norm().to_f64_lossy(), error: err.to_f64_lossy() });
        } else {
            let mid = (s0 + s1) * T::lit(0.5);
            stack.push((mid, s1, depth + 1));
            stack.push((s0, mid, depth + 1));
        }
    }
    Ok(SegmentSum { value: total, error, evals, end_w })
}

/// `integral (phi1, phi2, phi3)` along the concatenated `path`, starting on
/// the sheet where `w = start_w` at the first point.
pub fn integrate_contour<T: Real, P: PathSegment<T>>(
    surface: &RiemannSurface<T>,
    path: &[P],
    start_w: C<T>,
    opts: &ContourOptions<T>,
) -> Result<ContourResult<T>> {
    let zero = real(T::zero());
    let mut integrals = [zero; 3];
    let mut error_estimate = T::zero();
    let mut evaluations = 0;
    let mut w = Some(start_w);
    for (i, seg) in path.iter().enumerate() {
        let Some(w0) = w else {
            return Err(Error::Geometry(format!("segment {i} follows a singular end")));
        };
        let part = integrate_segment(surface, seg, w0, opts)?;
        for k in 0..3 {
            integrals[k] = integrals[k] + part.value[k];
        }
        error_estimate = error_estimate + part.error;
        evaluations += part.evals;
        w = part.end_w;
    }
    Ok(ContourResult { integrals, error_estimate, evaluations, end_w: w })
}

/// Integrals over a homology loop, starting from its recorded point.
pub fn integrate_loop<T: Real>(
    surface: &RiemannSurface<T>,
    lp: &HomologyLoop<T>,
    opts: &ContourOptions<T>,
) -> Result<ContourResult<T>> {
    integrate_contour(surface, &lp.path, lp.start.w, opts)
}
