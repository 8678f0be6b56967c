//! Parametrized path pieces in the z-plane, each on `s in [0, 1]`.

use crate::scalar::{cplx, Real, C};

pub trait PathSegment<T: Real>: Sync {
    fn point(&self, s: T) -> C<T>;
    /// `dz/ds`
    fn derivative(&self, s: T) -> C<T>;
    /// True when `point(1)` is not a regular point of the curve (branch point,
    /// `z = infinity`); the integrator then never evaluates the end itself.
    fn singular_end(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment<T> {
    Line { from: C<T>, to: C<T> },
    /// Circular arc `center + radius * exp(i theta)`, theta from `start` to `end`.
    Arc { center: C<T>, radius: T, start: T, end: T },
}

impl<T: Real> Segment<T> {
    pub fn line(from: C<T>, to: C<T>) -> Self {
        Segment::Line { from, to }
    }

    pub fn arc(center: C<T>, radius: T, start: T, end: T) -> Self {
        Segment::Arc { center, radius, start, end }
    }

    pub fn reversed(&self) -> Self {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, end } => Segment::Arc { center, radius, start: end, end: start },
        }
    }

    pub fn start(&self) -> C<T> {
        self.point(T::zero())
    }

    pub fn end(&self) -> C<T> {
        self.point(T::one())
    }

    /// Image under `z -> conj(z)`.
    pub fn conjugated(&self) -> Self {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: from.conj(), to: to.conj() },
            Segment::Arc { center, radius, start, end } => {
                Segment::Arc { center: center.conj(), radius, start: -start, end: -end }
            }
        }
    }

    /// Image under `z -> -conj(z)`.
    pub fn neg_conjugated(&self) -> Self {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: -from.conj(), to: -to.conj() },
            Segment::Arc { center, radius, start, end } => {
                Segment::Arc { center: -center.conj(), radius, start: T::PI() - start, end: T::PI() - end }
            }
        }
    }
}

impl<T: Real> PathSegment<T> for Segment<T> {
    fn point(&self, s: T) -> C<T> {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { center, radius, start, end } => {
                let th = start + (end - start) * s;
                center + cplx(th.cos(), th.sin()) * radius
            }
        }
    }

    fn derivative(&self, s: T) -> C<T> {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, end, .. } => {
                let th = start + (end - start) * s;
                cplx(-th.sin(), th.cos()) * (radius * (end - start))
            }
        }
    }
}

/// Reverses a closed or open path.
pub fn reverse_path<T: Real>(path: &[Segment<T>]) -> Vec<Segment<T>> {
    path.iter().rev().map(Segment::reversed).collect()
}

/// Counterclockwise circle around `center`, starting at `center + radius`.
pub fn circle<T: Real>(center: C<T>, radius: T) -> Vec<Segment<T>> {
    let half = T::PI();
    vec![Segment::arc(center, radius, T::zero(), half), Segment::arc(center, radius, half, half + half)]
}
