//! Planar symmetry curves of the piece and straight lines of its conjugate.

use std::f64::consts::PI;

use crate::error::Result;
use crate::period::Lattice;
use crate::quadrature::{integrate_endpoint_singular, SingularIntegral};
use crate::riemann::RiemannSurface;
use crate::surface::{symmetry_planes, Boundary, BuiltPiece, SurfaceMesh};

use super::{Check, VerificationReport};

/// Planarity of the piece's boundary curves, relative to the piece diameter.
pub const PLANARITY_TOL: f64 = 1e-7;
/// Straightness and axis alignment of the conjugate lines.
pub const STRAIGHTNESS_TOL: f64 = 1e-6;
/// Relative agreement of a curve's length with that of its conjugate line.
pub const LENGTH_TOL: f64 = 1e-6;
pub const PLANE_OFFSET_TOL: f64 = 1e-8;
const LENGTH_QUAD_TOL: f64 = 1e-13;

/// Coordinate axis normal to the symmetry plane of each curve; the conjugate
/// line of the curve is parallel to the same axis.
pub fn plane_axis(b: Boundary) -> usize {
    match b {
        Boundary::S1 | Boundary::S5 | Boundary::S7 => 0,
        Boundary::S2 | Boundary::S4 | Boundary::S6 => 1,
        Boundary::S3 | Boundary::End => 2,
    }
}

fn spread(mesh: &SurfaceMesh, vs: &[usize], k: usize) -> f64 {
    let (lo, hi) = vs.iter().map(|&v| mesh.vertices[v][k]).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
    hi - lo
}

fn mean(mesh: &SurfaceMesh, vs: &[usize], k: usize) -> f64 {
    vs.iter().map(|&v| mesh.vertices[v][k]).sum::<f64>() / vs.len() as f64
}

/// `|w|^2 = |g1 / g2|` on the real axis, from root distances; `dist(r)` gives
/// `|t - r|`.
fn abs_w2(s: &RiemannSurface<f64>, dist: impl Fn(f64) -> f64) -> f64 {
    let p = &s.params;
    let (l, l1, l2) = (p.lambda, p.lambda1, p.lambda2);
    let num = dist(l) * dist(-1.0) * dist(l1) * dist(-l2);
    let den = dist(-l) * dist(1.0) * dist(-l1) * dist(l2);
    num / den
}

/// Metric length `integral (1/|w| + |w|) |dh| / 2` of the real segment `[lo, hi]`.
pub fn real_segment_length(s: &RiemannSurface<f64>, lo: f64, hi: f64) -> Result<f64> {
    let a2 = s.consts.a2();
    let spec = SingularIntegral::new(lo, hi, LENGTH_QUAD_TOL, |t: f64, dl: f64, dh: f64| {
        let w2 = abs_w2(s, |r| {
            if r == lo {
                dl
            } else if r == hi {
                dh
            } else {
                (t - r).abs()
            }
        });
        let w = w2.sqrt();
        0.5 * (1.0 / w + w) / (t * t - a2).abs()
    });
    Ok(integrate_endpoint_singular(&spec)?.value)
}

/// Metric length of `[lo, infinity)` through `t = 1/s`.
pub fn real_ray_length(s: &RiemannSurface<f64>, lo: f64) -> Result<f64> {
    let a2 = s.consts.a2();
    let top = 1.0 / lo;
    let spec = SingularIntegral::new(0.0, top, LENGTH_QUAD_TOL, |u: f64, _dl: f64, dh: f64| {
        // |t - r| s = |1 - r s|
        let w2 = abs_w2(s, |r| if r == lo { lo * dh } else { (1.0 - r * u).abs() });
        let w = w2.sqrt();
        0.5 * (1.0 / w + w) / (1.0 - a2 * u * u).abs()
    });
    Ok(integrate_endpoint_singular(&spec)?.value)
}

/// Metric length of the boundary curve `b` between its first and last grid node.
pub fn curve_length(built: &BuiltPiece, b: Boundary) -> Result<f64> {
    let grid = &built.grid;
    let s = &grid.surface;
    if b == Boundary::S3 {
        // |w| = 1 on the imaginary axis: integral_0^inf dy / (y^2 + a^2)
        return Ok(PI / (2.0 * s.consts.a));
    }
    let nodes = grid.boundary_nodes(b);
    let ends = [nodes[0], nodes[nodes.len() - 1]].map(|k| grid.nodes[k].z.map(|z| z.re));
    match ends {
        [Some(x), Some(y)] => real_segment_length(s, x.min(y), x.max(y)),
        [Some(x), None] | [None, Some(x)] => real_ray_length(s, x),
        [None, None] => unreachable!("a curve has a finite end"),
    }
}

/// Planarity of S1..S7 in their coordinate planes, distinct plane offsets,
/// straightness of the conjugate lines, coplanarity of S1* and S7*, and
/// equal length of each curve and its conjugate line.
pub fn verify_symmetries(built: &BuiltPiece, lattice: &Lattice<f64>) -> Result<VerificationReport> {
    let piece = &built.pieces.piece;
    let conj = &built.pieces.conjugate;
    let a = built.grid.surface.consts.a;
    let diam = piece.diameter();
    let diam_conj = conj.diameter();
    let mut r = VerificationReport::default();

    for b in Boundary::CURVES {
        let vs = piece.boundary_vertices(b);
        let k = plane_axis(b);
        r.push(Check::at_most(
            format!("{}_planar_x{}", b.name(), k + 1),
            "boundary curve lies in a coordinate plane of reflection",
            spread(piece, &vs, k) / diam,
            PLANARITY_TOL,
        ));
    }
    let planes = symmetry_planes(piece);
    let s6 = piece.boundary_vertices(Boundary::S6);
    let s7 = piece.boundary_vertices(Boundary::S7);
    r.push(Check::at_most(
        "S6_in_plane_of_S4",
        "S6 lies in the plane containing S4",
        (mean(piece, &s6, 1) - planes.c4).abs() / diam,
        PLANARITY_TOL,
    ));
    r.push(Check::at_most(
        "S7_in_plane_of_S5",
        "S7 lies in the plane containing S5",
        (mean(piece, &s7, 0) - planes.c5).abs() / diam,
        PLANARITY_TOL,
    ));
    r.push(Check::close(
        "x1_planes_offset",
        "planes of S5 and S1 are distinct, half a period apart",
        PI / (2.0 * a),
        (planes.c5 - planes.c1).abs(),
        PLANE_OFFSET_TOL,
    ));
    r.push(Check::close(
        "x2_planes_offset",
        "planes of S4 and S2 are distinct, half a period apart",
        0.5 * lattice.v2y,
        (planes.c4 - planes.c2).abs(),
        PLANE_OFFSET_TOL,
    ));

    for b in Boundary::CURVES {
        let vs = conj.boundary_vertices(b);
        let k = plane_axis(b);
        let (p, q) = (conj.vertices[vs[0]], conj.vertices[vs[vs.len() - 1]]);
        let d: Vec<f64> = (0..3).map(|c| q[c] - p[c]).collect();
        let len = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sign = d[k].signum();
        let dir: Vec<f64> = d.iter().map(|x| sign * x / len).collect();
        let axis: Vec<f64> = (0..3).map(|c| if c == k { 1.0 } else { 0.0 }).collect();
        r.push(Check::close_vec(
            format!("{}_conjugate_direction", b.name()),
            "conjugate boundary is a line parallel to a coordinate axis",
            axis,
            dir,
            STRAIGHTNESS_TOL,
        ));
        let transverse = (0..3).filter(|&c| c != k).map(|c| spread(conj, &vs, c)).fold(0.0, f64::max);
        r.push(Check::at_most(
            format!("{}_conjugate_straight", b.name()),
            "conjugate boundary is a line parallel to a coordinate axis",
            transverse / diam_conj,
            STRAIGHTNESS_TOL,
        ));
        let measured = curve_length(built, b)?;
        r.push(Check::close(
            format!("{}_length_matches_conjugate", b.name()),
            "symmetry curve and conjugate line have the same length",
            1.0,
            measured / len,
            LENGTH_TOL,
        ));
    }
    let s1c = conj.boundary_vertices(Boundary::S1);
    let s7c = conj.boundary_vertices(Boundary::S7);
    r.push(Check::at_most(
        "S1_S7_conjugates_coplanar",
        "conjugate lines of S1 and S7 lie in one plane normal to x2",
        (mean(conj, &s1c, 1) - mean(conj, &s7c, 1)).abs() / diam_conj,
        STRAIGHTNESS_TOL,
    ));
    Ok(r)
}
