//! The genus-3 double cover `g2(z) w^2 = g1(z)`, its Weierstrass forms and
//! automorphisms.
//!
//! Sheets are tracked by analytic continuation: [`RiemannSurface::lift_w`]
//! returns whichever square root of `g1/g2` is closer to a hint, and
//! [`RiemannSurface::continue_along`] walks a parametrized path in steps small
//! enough for the hint to be unambiguous.
//!
//! Loop convention: every `HomologyLoop` is a counterclockwise stadium whose
//! starting value of `w` is obtained by continuation from `z = +infinity`
//! (where `w = +1`) through the half-plane containing the start point.

use serde::Serialize;

use crate::algebraic::{derive_constants, eval_g, DerivedConstants, FamilyParams, Quartic};
use crate::error::{Error, Result};
use crate::path::{PathSegment, Segment};
use crate::scalar::{cplx, real, Real, C};

/// Branch points closer than this are rejected by [`RiemannSurface::lift_w`].
pub const BRANCH_TOL: f64 = 1e-12;
/// Smallest continuation step, in path parameter units.
pub const MIN_STEP: f64 = 1e-13;
/// Maximal relative change of `w` accepted in one continuation step.
pub const STEP_RATIO: f64 = 0.1;
/// Clearance factor for homology loops.
pub const LOOP_CLEARANCE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchKind {
    ZeroOfG1,
    ZeroOfG2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint<T> {
    pub x: T,
    pub kind: BranchKind,
}

/// Branch points and the four cuts `[-1,-l]`, `[l,1]`, `[l1,l2]`, `[-l2,-l1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchData<T> {
    pub points: [BranchPoint<T>; 8],
    /// `(zero of g1, zero of g2)` per cut.
    pub cuts: [(T, T); 4],
}

impl<T: Real> BranchData<T> {
    pub fn new(params: &FamilyParams<T>) -> Self {
        let (l, l1, l2) = (params.lambda, params.lambda1, params.lambda2);
        let one = T::one();
        use BranchKind::*;
        let points = [
            BranchPoint { x: l, kind: ZeroOfG1 },
            BranchPoint { x: -one, kind: ZeroOfG1 },
            BranchPoint { x: l1, kind: ZeroOfG1 },
            BranchPoint { x: -l2, kind: ZeroOfG1 },
            BranchPoint { x: -l, kind: ZeroOfG2 },
            BranchPoint { x: one, kind: ZeroOfG2 },
            BranchPoint { x: -l1, kind: ZeroOfG2 },
            BranchPoint { x: l2, kind: ZeroOfG2 },
        ];
        let cuts = [(l, one), (-one, -l), (l1, l2), (-l2, -l1)];
        Self { points, cuts }
    }

    /// Interval `[lo, hi]` of each cut.
    pub fn cut_intervals(&self) -> [(T, T); 4] {
        self.cuts.map(|(p, q)| (p.min(q), p.max(q)))
    }

    pub fn distance(&self, z: C<T>) -> T {
        self.points.iter().map(|b| (z - real(b.x)).norm()).fold(T::infinity(), T::min)
    }
}

/// A point `(z, w)` on the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<T> {
    pub z: C<T>,
    pub w: C<T>,
}

/// Coefficients of the forms against `dz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormValues<T> {
    pub phi: [C<T>; 3],
    pub gauss: C<T>,
    pub dh: C<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Automorphism {
    /// `(z, w) -> (conj z, -conj w)`
    Tau1,
    /// `(z, w) -> (conj z, conj w)`
    Tau2,
    /// `(z, w) -> (-conj z, 1 / conj w)`
    Tau3,
}

/// Pullback of one form: `tau^* phi_k = sign * conj(phi_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pullback {
    pub conjugate: bool,
    pub sign: i8,
}

impl Automorphism {
    pub const ALL: [Automorphism; 3] = [Automorphism::Tau1, Automorphism::Tau2, Automorphism::Tau3];

    pub fn pullback_table(self) -> [Pullback; 3] {
        let c = |sign| Pullback { conjugate: true, sign };
        match self {
            Automorphism::Tau1 => [c(-1), c(1), c(1)],
            Automorphism::Tau2 => [c(1), c(-1), c(1)],
            Automorphism::Tau3 => [c(1), c(1), c(-1)],
        }
    }

    /// Applies the pullback table to integrals of `(phi1, phi2, phi3)`.
    pub fn transform_integrals<T: Real>(self, v: [C<T>; 3]) -> [C<T>; 3] {
        let t = self.pullback_table();
        std::array::from_fn(|k| {
            let x = if t[k].conjugate { v[k].conj() } else { v[k] };
            if t[k].sign < 0 {
                -x
            } else {
                x
            }
        })
    }

    pub fn map_z<T: Real>(self, z: C<T>) -> C<T> {
        match self {
            Automorphism::Tau1 | Automorphism::Tau2 => z.conj(),
            Automorphism::Tau3 => -z.conj(),
        }
    }

    pub fn map_segment<T: Real>(self, s: &Segment<T>) -> Segment<T> {
        match self {
            Automorphism::Tau1 | Automorphism::Tau2 => s.conjugated(),
            Automorphism::Tau3 => s.neg_conjugated(),
        }
    }

    pub fn apply<T: Real>(self, p: CurvePoint<T>) -> Result<CurvePoint<T>> {
        let w = match self {
            Automorphism::Tau1 => -p.w.conj(),
            Automorphism::Tau2 => p.w.conj(),
            Automorphism::Tau3 => {
                if p.w.norm() == T::zero() {
                    return Err(Error::DivisionByZero("tau3 at w = 0"));
                }
                p.w.conj().inv()
            }
        };
        Ok(CurvePoint { z: self.map_z(p.z), w })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LoopLabel {
    Gamma1,
    Gamma2,
    Gamma3,
}

impl LoopLabel {
    pub const ALL: [LoopLabel; 3] = [LoopLabel::Gamma1, LoopLabel::Gamma2, LoopLabel::Gamma3];

    pub fn name(self) -> &'static str {
        match self {
            LoopLabel::Gamma1 => "gamma1",
            LoopLabel::Gamma2 => "gamma2",
            LoopLabel::Gamma3 => "gamma3",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologyLoop<T> {
    pub label: LoopLabel,
    pub path: Vec<Segment<T>>,
    pub start: CurvePoint<T>,
    pub clearance: T,
    /// Real interval wound around.
    pub interval: (T, T),
}

/// The curve of one family member together with its constants.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannSurface<T> {
    pub params: FamilyParams<T>,
    pub consts: DerivedConstants<T>,
    pub branch: BranchData<T>,
}

impl<T: Real> RiemannSurface<T> {
    pub fn new(params: FamilyParams<T>) -> Result<Self> {
        let consts = derive_constants(&params)?;
        Ok(Self { params, consts, branch: BranchData::new(&params) })
    }

    pub fn g1(&self, z: C<T>) -> C<T> {
        eval_g(Quartic::G1, z, &self.params)
    }

    pub fn g2(&self, z: C<T>) -> C<T> {
        eval_g(Quartic::G2, z, &self.params)
    }

    /// The root of `g1/g2` analytic off the four cuts with value `1` at infinity.
    ///
    /// Computed as a product of principal square roots of `(z - p)/(z - q)`
    /// over the cut end points; each factor is cut exactly along `[p, q]`.
    pub fn principal_root(&self, z: C<T>) -> C<T> {
        self.branch
            .cuts
            .iter()
            .fold(real(T::one()), |acc, &(p, q)| acc * ((z - real(p)) / (z - real(q))).sqrt())
    }

    /// Square root of `g1(z)/g2(z)` closest to `hint`.
    pub fn lift_w(&self, z: C<T>, hint: C<T>) -> Result<C<T>> {
        let d = self.branch.distance(z);
        if d <= T::lit(BRANCH_TOL) {
            return Err(Error::BranchPoint { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
        }
        let r = self.principal_root(z);
        let dp = (r - hint).norm();
        let dm = (r + hint).norm();
        if (dp - dm).abs() <= T::lit(1e-14) * (r.norm() + hint.norm()) {
            return Err(Error::AmbiguousHint { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
        }
        Ok(if dp < dm { r } else { -r })
    }

    /// Continues `w` along `path` from parameter `s0` (where it equals `w0`)
    /// to `s1`.
    ///
    /// Steps satisfy `|dw| < 0.1 |w|` and `|dz| <= dist(z, branch points) / 2`.
    pub fn continue_along<F>(&self, path: F, s0: T, w0: C<T>, s1: T) -> Result<C<T>>
    where
        F: Fn(T) -> C<T>,
    {
        let min_step = T::lit(MIN_STEP);
        let ratio = T::lit(STEP_RATIO);
        let half = T::lit(0.5);
        let mut s = s0;
        let mut z = path(s0);
        let mut w = w0;
        let mut step = s1 - s0;
        while s != s1 {
            let mut trial = if (s1 - s).abs() <= step.abs() { s1 } else { s + step };
            loop {
                let zt = path(trial);
                let reach = half * self.branch.distance(z);
                let accepted = if (zt - z).norm() <= reach {
                    match self.lift_w(zt, w) {
                        Ok(wt) if (wt - w).norm() < ratio * w.norm() => Some((zt, wt)),
                        Ok(_) | Err(Error::AmbiguousHint { .. }) => None,
                        Err(e) => return Err(e),
                    }
                } else {
                    None
                };
                if let Some((zt, wt)) = accepted {
                    step = (trial - s) * T::lit(2.0);
                    s = trial;
                    z = zt;
                    w = wt;
                    break;
                }
                let next = (trial - s) * half;
                if next.abs() < min_step {
                    return Err(Error::SheetJump(s.to_f64_lossy()));
                }
                trial = s + next;
            }
        }
        Ok(w)
    }

    /// Continues `w` along one segment, from its start to its end.
    pub fn continue_segment<P: PathSegment<T>>(&self, seg: &P, w0: C<T>) -> Result<C<T>> {
        self.continue_along(|s| seg.point(s), T::zero(), w0, T::one())
    }

    /// The point over `z` on the sheet with `w(+infinity) = +1`, reached through
    /// the closed upper half-plane (or the lower one when `Im z < 0`).
    pub fn from_infinity(&self, z: C<T>) -> Result<CurvePoint<T>> {
        let two = T::lit(2.0);
        let far = two * self.params.lambda2 + T::lit(10.0) + z.re.abs();
        let start = real(far);
        let w_far = self.lift_w(start, real(T::one()))?;
        let height = (T::one() + z.im.abs()) * if z.im < T::zero() { -T::one() } else { T::one() };
        let legs = [
            Segment::line(start, cplx(far, height)),
            Segment::line(cplx(far, height), cplx(z.re, height)),
            Segment::line(cplx(z.re, height), z),
        ];
        let mut w = w_far;
        for leg in &legs {
            w = self.continue_segment(leg, w)?;
        }
        Ok(CurvePoint { z, w })
    }

    /// `|g2 w^2 - g1|` relative to `1 + |g1| + |g2|`.
    pub fn residual(&self, p: &CurvePoint<T>) -> T {
        let g1 = self.g1(p.z);
        let g2 = self.g2(p.z);
        (g2 * p.w * p.w - g1).norm() / (T::one() + g1.norm() + g2.norm())
    }

    pub fn is_on_curve(&self, p: &CurvePoint<T>) -> bool {
        self.residual(p) <= T::lit(1e-9)
    }

    /// Form coefficients without the end check; `w` must be nonzero and finite.
    ///
    /// `phi2` uses the reduced form `i (z^2 - b^2) / (g2 w)`, which stays
    /// accurate near the ends where `1/w + w` cancels.
    #[inline]
    pub fn forms(&self, z: C<T>, w: C<T>) -> [C<T>; 3] {
        let a = real(self.consts.a);
        let b = real(self.consts.b);
        let dh = ((z - a) * (z + a)).inv();
        let half = T::lit(0.5);
        let phi1 = (w.inv() - w) * dh * half;
        let phi2 = cplx(T::zero(), T::one()) * (z - b) * (z + b) / (self.g2(z) * w);
        [phi1, phi2, dh]
    }

    /// Gauss map, height differential and the three forms at `p`.
    pub fn eval_forms(&self, p: &CurvePoint<T>, end_radius: T) -> Result<FormValues<T>> {
        let a = real(self.consts.a);
        if (p.z - a).norm() < end_radius || (p.z + a).norm() < end_radius {
            return Err(Error::EndSingularity { re: p.z.re.to_f64_lossy(), im: p.z.im.to_f64_lossy() });
        }
        if p.w.norm() == T::zero() || !(p.w.re.is_finite() && p.w.im.is_finite()) {
            return Err(Error::BranchPoint { re: p.z.re.to_f64_lossy(), im: p.z.im.to_f64_lossy() });
        }
        let phi = self.forms(p.z, p.w);
        Ok(FormValues { phi, gauss: p.w, dh: phi[2] })
    }

    /// Counterclockwise stadium around the interval of `label`.
    pub fn homology_loop(&self, label: LoopLabel) -> Result<HomologyLoop<T>> {
        let (l, l1, l2) = (self.params.lambda, self.params.lambda1, self.params.lambda2);
        let one = T::one();
        let (p, q) = match label {
            LoopLabel::Gamma1 => (l, one),
            LoopLabel::Gamma2 => (one, l1),
            LoopLabel::Gamma3 => (l1, l2),
        };
        let a = self.consts.a;
        // branch points and the two ends on the real axis
        let specials = self.branch.points.iter().map(|b| b.x).chain([a, -a]);
        let mut gap = q - p;
        for x in specials {
            if x < p {
                gap = gap.min(p - x);
            } else if x > q {
                gap = gap.min(x - q);
            }
        }
        let c = T::lit(LOOP_CLEARANCE) * gap;
        if c < T::lit(1e-8) {
            return Err(Error::Geometry(format!("loop clearance {c} too small")));
        }
        let half_pi = T::FRAC_PI_2();
        let pi = T::PI();
        let ic = cplx(T::zero(), c);
        let (pz, qz) = (real(p), real(q));
        let path = vec![
            Segment::arc(qz, c, T::zero(), half_pi),
            Segment::line(qz + ic, pz + ic),
            Segment::arc(pz, c, half_pi, half_pi + pi),
            Segment::line(pz - ic, qz - ic),
            Segment::arc(qz, c, half_pi + pi, pi + pi),
        ];
        let start = self.from_infinity(real(q + c))?;
        Ok(HomologyLoop { label, path, start, clearance: c, interval: (p, q) })
    }
}
