//! Discrete minimality, regularity of the induced metric and the graph
//! property of the doubled conjugate piece.

use crate::error::Result;
use crate::riemann::RiemannSurface;
use crate::scalar::C;
use crate::surface::grid::dz_du;
use crate::surface::mesh::{cross, dot, norm, sub};
use crate::surface::{Boundary, BuiltPiece, NodeKind, SurfaceMesh};

use super::{Check, VerificationReport};

type C64 = C<f64>;

/// Vertices closer than this (in the `u` plane) to a branch point or to
/// `z = infinity` are left out of the curvature study: the grid is not a
/// conformal chart there.
pub const SINGULAR_EXCLUSION: f64 = 0.3;
/// Expected ratio of the maximal discrete mean curvature between two
/// resolutions a factor two apart, and its relative tolerance.
pub const REFINEMENT_RATIO: f64 = 2.0;
pub const REFINEMENT_TOL: f64 = 0.3;
/// Lower bound on the observed convergence order `log2(ratio)`.
pub const MIN_ORDER: f64 = 0.5;
/// Bound on `|H| * local edge length` at the finer resolution.
pub const CURVATURE_EDGE_BOUND: f64 = 0.01;
/// Projected faces with `|projected area| <= DEGENERATE_RATIO * area` are
/// treated as vertical.
pub const DEGENERATE_RATIO: f64 = 1e-3;

/// Mean-curvature vectors from the cotangent Laplacian with barycentric
/// areas, `H = Delta x / 2`. Defined at every vertex; meaningful only at
/// interior ones.
pub fn mean_curvature(mesh: &SurfaceMesh) -> Vec<[f64; 3]> {
    let n = mesh.vertices.len();
    let mut lap = vec![[0.0; 3]; n];
    let mut area = vec![0.0; n];
    for &f in &mesh.faces {
        let x = f.map(|i| mesh.vertices[i]);
        let a = mesh.face_area(f);
        for k in 0..3 {
            let (i, j, o) = (k, (k + 1) % 3, (k + 2) % 3);
            let (u, v) = (sub(x[i], x[o]), sub(x[j], x[o]));
            let c = norm(cross(u, v));
            if c == 0.0 {
                continue;
            }
            let cot = dot(u, v) / c;
            let e = sub(x[j], x[i]);
            for d in 0..3 {
                lap[f[i]][d] += cot * e[d];
                lap[f[j]][d] -= cot * e[d];
            }
        }
        for &v in &f {
            area[v] += a / 3.0;
        }
    }
    (0..n)
        .map(|v| {
            if area[v] == 0.0 {
                [0.0; 3]
            } else {
                lap[v].map(|l| l / (4.0 * area[v]))
            }
        })
        .collect()
}

/// Interior vertices at `u`-distance at least [`SINGULAR_EXCLUSION`] from
/// every singular grid node.
pub fn curvature_sample(built: &BuiltPiece) -> Vec<usize> {
    let grid = &built.grid;
    let singular: Vec<(f64, f64)> = grid.nodes.iter().filter(|n| n.kind.is_singular()).map(|n| (n.rho, n.theta)).collect();
    built
        .pieces
        .piece
        .interior_vertices()
        .into_iter()
        .filter(|&v| {
            let n = &grid.nodes[built.pieces.piece.provenance[v].node];
            singular.iter().all(|&(r, t)| (n.rho - r).hypot(n.theta - t) >= SINGULAR_EXCLUSION)
        })
        .collect()
}

fn mean_edge_length(mesh: &SurfaceMesh) -> Vec<f64> {
    let n = mesh.vertices.len();
    let mut sum = vec![0.0; n];
    let mut count = vec![0usize; n];
    for &(p, q) in mesh.edge_counts().keys() {
        let l = norm(sub(mesh.vertices[p], mesh.vertices[q]));
        for v in [p, q] {
            sum[v] += l;
            count[v] += 1;
        }
    }
    (0..n).map(|v| if count[v] == 0 { 0.0 } else { sum[v] / count[v] as f64 }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureStats {
    pub max_h: f64,
    pub max_h_edge: f64,
    pub samples: usize,
}

pub fn curvature_stats(built: &BuiltPiece) -> CurvatureStats {
    let mesh = &built.pieces.piece;
    let h = mean_curvature(mesh);
    let len = mean_edge_length(mesh);
    let sample = curvature_sample(built);
    let mut max_h = 0.0f64;
    let mut max_h_edge = 0.0f64;
    for &v in &sample {
        let hv = norm(h[v]);
        max_h = max_h.max(hv);
        max_h_edge = max_h_edge.max(hv * len[v]);
    }
    CurvatureStats { max_h, max_h_edge, samples: sample.len() }
}

/// Conformal factor of `(1/|G| + |G|)^2 |dh|^2` in the local chart at a node:
/// `u` at regular nodes, the square root of `z - z_b` at branch points and
/// `1/z` at infinity.
pub fn metric_factor(surface: &RiemannSurface<f64>, kind: NodeKind, z: Option<C64>, w: Option<C64>, dz: C64) -> f64 {
    let a2 = surface.consts.a2();
    let h = 1e-6;
    match (kind, z) {
        (NodeKind::Infinity, _) | (_, None) => 4.0,
        (NodeKind::ZeroOfG1, Some(zb)) => {
            let d = (surface.g1(zb + h) - surface.g1(zb - h)) / (2.0 * h);
            4.0 * (surface.g2(zb) / d).norm() / (zb * zb - a2).norm_sqr()
        }
        (NodeKind::ZeroOfG2, Some(zb)) => {
            let d = (surface.g2(zb + h) - surface.g2(zb - h)) / (2.0 * h);
            4.0 * (surface.g1(zb) / d).norm() / (zb * zb - a2).norm_sqr()
        }
        (NodeKind::Regular, Some(z)) => {
            let w = w.map_or(f64::INFINITY, |w| w.norm());
            let g = 1.0 / w + w;
            g * g * (dz / (z * z - a2)).norm_sqr()
        }
    }
}

/// Smallest and largest metric factor over the grid nodes.
pub fn metric_range(built: &BuiltPiece) -> (f64, f64) {
    let grid = &built.grid;
    let a = grid.surface.consts.a;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (k, n) in grid.nodes.iter().enumerate() {
        let f = metric_factor(&grid.surface, n.kind, n.z, built.pieces.integrals.w[k], dz_du(a, n.rho, n.theta));
        if f.is_nan() {
            return (f64::NAN, f64::NAN);
        }
        lo = lo.min(f);
        hi = hi.max(f);
    }
    (lo, hi)
}

/// The conjugate piece together with its image under the half-turn about
/// the conjugate line of S3.
pub fn doubled_conjugate(conj: &SurfaceMesh) -> SurfaceMesh {
    let axis = conj.boundary_vertices(Boundary::S3);
    let p = axis.iter().map(|&v| conj.vertices[v][0]).sum::<f64>() / axis.len() as f64;
    let q = axis.iter().map(|&v| conj.vertices[v][1]).sum::<f64>() / axis.len() as f64;
    let mut out = conj.clone();
    let mut map = vec![0usize; conj.vertices.len()];
    for (v, slot) in map.iter_mut().enumerate() {
        if conj.labels[v].contains(Boundary::S3) {
            *slot = v;
        } else {
            let x = conj.vertices[v];
            *slot = out.vertices.len();
            out.vertices.push([2.0 * p - x[0], 2.0 * q - x[1], x[2]]);
            let mut prov = conj.provenance[v];
            prov.copy = 1;
            out.provenance.push(prov);
            out.labels.push(conj.labels[v]);
        }
    }
    let base = out.faces.len();
    for flip in [true, false] {
        out.faces.truncate(base);
        for f in &conj.faces {
            let g = f.map(|v| map[v]);
            out.faces.push(if flip { [g[0], g[2], g[1]] } else { g });
        }
        if out.is_manifold() {
            break;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionStats {
    pub positive: usize,
    pub negative: usize,
    pub degenerate: usize,
    /// Centroids of non-degenerate faces lying inside another such face.
    pub overlaps: usize,
}

fn projected(mesh: &SurfaceMesh, f: [usize; 3]) -> [[f64; 2]; 3] {
    f.map(|v| [mesh.vertices[v][1], mesh.vertices[v][2]])
}

fn signed_area(t: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[1][1] - t[0][1]) * (t[2][0] - t[0][0]))
}

fn strictly_inside(t: &[[f64; 2]; 3], p: [f64; 2]) -> bool {
    let a = signed_area(t);
    let sub_area = |i: usize| {
        let mut s = *t;
        s[i] = p;
        signed_area(&s) / a
    };
    let eps = 1e-9;
    (0..3).all(|i| sub_area(i) > eps)
}

/// Orientation and overlap of the faces projected to the `(x2, x3)` plane.
pub fn projection_stats(mesh: &SurfaceMesh) -> ProjectionStats {
    let mut tris = Vec::new();
    let (mut positive, mut negative, mut degenerate) = (0, 0, 0);
    for &f in &mesh.faces {
        let t = projected(mesh, f);
        let s = signed_area(&t);
        if s.abs() <= DEGENERATE_RATIO * mesh.face_area(f) {
            degenerate += 1;
            continue;
        }
        if s > 0.0 {
            positive += 1;
        } else {
            negative += 1;
        }
        tris.push(t);
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for t in &tris {
        for p in t {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
    }
    let nb = ((tris.len() as f64).sqrt().ceil() as usize).max(1);
    let cell = |x: f64, d: usize| -> usize {
        let span = (hi[d] - lo[d]).max(f64::MIN_POSITIVE);
        (((x - lo[d]) / span * nb as f64) as usize).min(nb - 1)
    };
    let mut bins: Vec<Vec<usize>> = vec![Vec::new(); nb * nb];
    for (k, t) in tris.iter().enumerate() {
        let (mut bl, mut bh) = ([usize::MAX; 2], [0usize; 2]);
        for p in t {
            for d in 0..2 {
                let c = cell(p[d], d);
                bl[d] = bl[d].min(c);
                bh[d] = bh[d].max(c);
            }
        }
        for i in bl[0]..=bh[0] {
            for j in bl[1]..=bh[1] {
                bins[j * nb + i].push(k);
            }
        }
    }
    let mut overlaps = 0;
    for (k, t) in tris.iter().enumerate() {
        let c = [(t[0][0] + t[1][0] + t[2][0]) / 3.0, (t[0][1] + t[1][1] + t[2][1]) / 3.0];
        let bin = &bins[cell(c[1], 1) * nb + cell(c[0], 0)];
        if bin.iter().any(|&o| o != k && strictly_inside(&tris[o], c)) {
            overlaps += 1;
        }
    }
    ProjectionStats { positive, negative, degenerate, overlaps }
}

fn line_coord(mesh: &SurfaceMesh, b: Boundary, k: usize) -> f64 {
    let vs = mesh.boundary_vertices(b);
    vs.iter().map(|&v| mesh.vertices[v][k]).sum::<f64>() / vs.len() as f64
}

/// Sides of the rectangle under the doubled conjugate piece: the height
/// between the lines of S2 and S6, and the width twice the offset of the
/// line of S1 from the axis S3.
pub fn graph_rectangle(conj: &SurfaceMesh) -> (f64, f64) {
    let h = (line_coord(conj, Boundary::S6, 2) - line_coord(conj, Boundary::S2, 2)).abs();
    let w = 2.0 * (line_coord(conj, Boundary::S1, 1) - line_coord(conj, Boundary::S3, 1)).abs();
    (h, w)
}

/// Discrete mean curvature of `fine` (and its decay relative to `coarse`,
/// built at half the resolution), regularity of the metric at every node,
/// and the graph property of the doubled conjugate piece of `fine`.
pub fn verify_minimality_and_graph(fine: &BuiltPiece, coarse: &BuiltPiece) -> Result<VerificationReport> {
    let mut r = VerificationReport::default();
    let (cf, cc) = (curvature_stats(fine), curvature_stats(coarse));
    r.push(Check::below(
        "mean_curvature_times_edge",
        "discrete mean curvature vanishes with the mesh size",
        CURVATURE_EDGE_BOUND,
        cf.max_h_edge,
    ));
    r.push(Check::close(
        "mean_curvature_refinement_ratio",
        "discrete mean curvature decays at first order under refinement",
        REFINEMENT_RATIO,
        cc.max_h / cf.max_h,
        REFINEMENT_TOL * REFINEMENT_RATIO,
    ));

    r.push(Check::above(
        "mean_curvature_observed_order",
        "discrete mean curvature decays at least at first order",
        MIN_ORDER,
        (cc.max_h / cf.max_h).log2(),
    ));

    let (lo, hi) = metric_range(fine);
    r.push(Check::above("metric_factor_min", "induced metric is nondegenerate at every node", 0.0, lo));
    r.push(Check::below("metric_factor_max", "induced metric is finite at every node", f64::INFINITY, hi));

    let doubled = doubled_conjugate(&fine.pieces.conjugate);
    r.push(Check::flag("doubled_conjugate_oriented", "doubled conjugate piece is a consistently oriented surface", doubled.is_manifold()));
    let ps = projection_stats(&doubled);
    let minority = ps.positive.min(ps.negative);
    r.push(Check::at_most(
        "projection_orientation",
        "doubled conjugate piece is a graph over a rectangle in the (x2, x3) plane",
        minority as f64,
        0.0,
    ));
    r.push(Check::at_most(
        "projection_overlaps",
        "doubled conjugate piece is a graph over a rectangle in the (x2, x3) plane",
        ps.overlaps as f64,
        0.0,
    ));
    let (h, w) = graph_rectangle(&fine.pieces.conjugate);
    let gamma = h + w + h.hypot(w);
    r.push(Check::below(
        "triangle_condition",
        "twice the infinite-data length of a triangle stays below its perimeter",
        1.0,
        2.0 * h / gamma,
    ));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::FamilyParams;
    use crate::surface::mesh::tests::square;

    fn patch(n: usize, f: impl Fn(f64, f64) -> [f64; 3]) -> SurfaceMesh {
        let mut m = square();
        m.vertices.clear();
        m.faces.clear();
        m.labels.clear();
        m.provenance.clear();
        for j in 0..=n {
            for i in 0..=n {
                m.vertices.push(f(i as f64 / n as f64, j as f64 / n as f64));
                m.labels.push(Default::default());
                m.provenance.push(Default::default());
            }
        }
        for j in 0..n {
            for i in 0..n {
                let k = j * (n + 1) + i;
                m.faces.push([k, k + 1, k + n + 2]);
                m.faces.push([k, k + n + 2, k + n + 1]);
            }
        }
        m
    }

    #[test]
    fn flat_mesh_has_zero_curvature() {
        let m = patch(6, |s, t| [s + 0.3 * t, 2.0 * t, 0.5 * s]);
        let h = mean_curvature(&m);
        for v in m.interior_vertices() {
            assert!(norm(h[v]) < 1e-12);
        }
    }

    #[test]
    fn metric_factor_far_out_is_finite() {
        let s = RiemannSurface::new(FamilyParams::new(0.5, 2.0, 3.0).unwrap()).unwrap();
        let z = C64::new(10.0, 0.0);
        let w = s.lift_w(z, C64::new(1.0, 0.0)).unwrap();
        let f = metric_factor(&s, NodeKind::Regular, Some(z), Some(w), C64::new(1.0, 0.0));
        assert!(f.is_finite() && f > 0.0);
        let g = 1.0 / w.norm() + w.norm();
        assert!((f - g * g / (100.0 - s.consts.a2()).powi(2)).abs() < 1e-15, "{f}");
    }

    #[test]
    fn unit_sphere_patch_curvature() {
        let n = 40;
        let m = patch(n, |s, t| {
            let (th, ph) = (0.6 + 0.8 * t, 0.8 * s);
            [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
        });
        let h = mean_curvature(&m);
        let mid = (n / 2) * (n + 1) + n / 2;
        assert!((norm(h[mid]) - 1.0).abs() < 1e-2, "{}", norm(h[mid]));
    }
}
