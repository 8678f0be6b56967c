//! Weierstrass integration over the grid: node positions of the piece and of
//! its conjugate from one set of complex edge integrals.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::path::{PathSegment, Segment};
use crate::quadrature::{integrate_contour, ContourOptions};
use crate::scalar::C;

use super::grid::{dz_du, z_of_u, DomainGrid, NodeKind};
use super::mesh::{Provenance, SurfaceMesh};

type C64 = C<f64>;

/// Tolerance on the sum of the four edge integrals around a cell.
pub const CYCLE_TOL: f64 = 1e-9;

/// Straight segment in the `u` plane between two grid nodes. When `smooth`
/// is set the end `s = 1` is a branch point or `z = infinity`, and the
/// parametrization `1 - (1 - s)^2` makes the integrand bounded there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEdge {
    pub a: f64,
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub smooth: bool,
}

impl GridEdge {
    fn sigma(&self, s: f64) -> (f64, f64) {
        if self.smooth {
            (1.0 - (1.0 - s) * (1.0 - s), 2.0 * (1.0 - s))
        } else {
            (s, 1.0)
        }
    }

    fn at(&self, t: f64) -> (f64, f64) {
        let r = if self.from.0 == self.to.0 { self.from.0 } else { self.from.0 + (self.to.0 - self.from.0) * t };
        let th = if self.from.1 == self.to.1 { self.from.1 } else { self.from.1 + (self.to.1 - self.from.1) * t };
        (r, th)
    }
}

impl PathSegment<f64> for GridEdge {
    fn point(&self, s: f64) -> C64 {
        let (r, th) = self.at(self.sigma(s).0);
        z_of_u(self.a, r, th)
    }

    fn derivative(&self, s: f64) -> C64 {
        let (t, dt) = self.sigma(s);
        let (r, th) = self.at(t);
        let du = C64::new(self.to.0 - self.from.0, self.to.1 - self.from.1);
        dz_du(self.a, r, th) * du * dt
    }

    fn singular_end(&self) -> bool {
        self.smooth
    }
}

/// Complex integrals of `(phi1, phi2, phi3)` from the base point to every node.
#[derive(Debug, Clone, PartialEq)]
pub struct GridIntegrals {
    pub values: Vec<[C64; 3]>,
    /// `w` at each node; `None` where `w = infinity`.
    pub w: Vec<Option<C64>>,
    pub max_cycle_residual: f64,
    pub edge_count: usize,
    pub evaluations: usize,
}

fn edge_path(grid: &DomainGrid, p: usize, q: usize) -> GridEdge {
    let (np, nq) = (&grid.nodes[p], &grid.nodes[q]);
    GridEdge { a: grid.surface.consts.a, from: (np.rho, np.theta), to: (nq.rho, nq.theta), smooth: nq.kind.is_singular() }
}

fn singular_w(kind: NodeKind) -> Option<C64> {
    match kind {
        NodeKind::ZeroOfG1 => Some(C64::new(0.0, 0.0)),
        NodeKind::ZeroOfG2 => None,
        NodeKind::Infinity => Some(C64::new(1.0, 0.0)),
        NodeKind::Regular => unreachable!("regular node"),
    }
}

/// Integrates the forms from `z0 = i` to every grid node.
///
/// Values of `w` are propagated along a breadth-first spanning tree; every
/// grid edge is then integrated independently (in parallel) and the tree
/// sums give the node values. The sum around each cell is audited.
pub fn integrate_grid(grid: &DomainGrid, opts: &ContourOptions<f64>) -> Result<GridIntegrals> {
    let surface = &grid.surface;
    let a = surface.consts.a;
    let n = grid.nodes.len();
    let last_i = grid.n_rho() - 1;

    // root: s3 node closest to z = i, which sits at theta = 2 atan(a)
    let theta_base = 2.0 * a.atan();
    let root_j = (1..grid.n_theta() - 1)
        .min_by(|&x, &y| (grid.theta[x] - theta_base).abs().total_cmp(&(grid.theta[y] - theta_base).abs()))
        .ok_or_else(|| Error::Geometry("no interior node on s3".into()))?;
    let root = grid.index(last_i, root_j);
    let base = surface.from_infinity(C64::new(0.0, 1.0))?;
    let z_root = grid.nodes[root].z.expect("s3 node is finite");
    let lead = integrate_contour(surface, &[Segment::line(base.z, z_root)], base.w, opts)?;

    let mut w: Vec<Option<C64>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    w[root] = lead.end_w;
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(p) = queue.pop_front() {
        order.push(p);
        if grid.nodes[p].kind.is_singular() {
            continue;
        }
        let wp = w[p].expect("regular node has finite w");
        for q in grid.neighbors(p) {
            if seen[q] {
                continue;
            }
            seen[q] = true;
            parent[q] = p;
            w[q] = match grid.nodes[q].kind {
                NodeKind::Regular => Some(surface.continue_segment(&edge_path(grid, p, q), wp)?),
                k => singular_w(k),
            };
            queue.push_back(q);
        }
    }
    if order.len() != n {
        return Err(Error::Geometry("grid is not connected".into()));
    }

    // every edge oriented away from a singular end
    let edges: Vec<(usize, usize)> = grid
        .edges()
        .into_iter()
        .map(|(p, q)| if grid.nodes[p].kind.is_singular() { (q, p) } else { (p, q) })
        .collect();
    let integrals = edges
        .par_iter()
        .map(|&(p, q)| {
            let path = edge_path(grid, p, q);
            let start = w[p].expect("edge starts at a regular node");
            let r = integrate_contour(surface, &[path], start, opts)?;
            if let (Some(we), Some(wq)) = (r.end_w, w[q]) {
                if (we - wq).norm() > 1e-7 * (1.0 + wq.norm()) {
                    return Err(Error::SheetJump(p as f64));
                }
            }
            Ok((r.integrals, r.evaluations))
        })
        .collect::<Result<Vec<_>>>()?;
    let evaluations = integrals.iter().map(|x| x.1).sum::<usize>() + lead.evaluations;

    let mut lookup = std::collections::HashMap::with_capacity(edges.len());
    for (k, &(p, q)) in edges.iter().enumerate() {
        lookup.insert((p, q), k);
    }
    let oriented = |p: usize, q: usize| -> [C64; 3] {
        match lookup.get(&(p, q)) {
            Some(&k) => integrals[k].0,
            None => integrals[lookup[&(q, p)]].0.map(|v| -v),
        }
    };

    let zero = C64::new(0.0, 0.0);
    let mut values = vec![[zero; 3]; n];
    values[root] = lead.integrals;
    for &q in order.iter().skip(1) {
        let p = parent[q];
        let e = oriented(p, q);
        values[q] = std::array::from_fn(|k| values[p][k] + e[k]);
    }

    let mut max_cycle_residual = 0.0f64;
    for cell in grid.cells() {
        let mut sum = [zero; 3];
        for k in 0..4 {
            let e = oriented(cell[k], cell[(k + 1) % 4]);
            for c in 0..3 {
                sum[c] += e[c];
            }
        }
        let r = sum.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if r > CYCLE_TOL {
            return Err(Error::CycleResidual { quad: cell[0], residual: r, tol: CYCLE_TOL });
        }
        max_cycle_residual = max_cycle_residual.max(r);
    }
    Ok(GridIntegrals { values, w, max_cycle_residual, edge_count: edges.len(), evaluations })
}

/// Node positions `Re` (piece) or `-Im` (conjugate piece) of the integrals.
pub fn piece_from_integrals(grid: &DomainGrid, ints: &GridIntegrals, conjugate: bool) -> SurfaceMesh {
    let vertices = ints
        .values
        .iter()
        .map(|v| if conjugate { [-v[0].im, -v[1].im, -v[2].im] } else { [v[0].re, v[1].re, v[2].re] })
        .collect();
    let mut faces = Vec::with_capacity(2 * grid.cells().len());
    for [p, q, r, s] in grid.cells() {
        faces.push([p, q, r]);
        faces.push([p, r, s]);
    }
    let provenance = grid
        .nodes
        .iter()
        .enumerate()
        .map(|(k, node)| Provenance { node: k, copy: 0, z: node.z, w: ints.w[k] })
        .collect();
    let labels = grid.nodes.iter().map(|n| n.labels).collect();
    SurfaceMesh { vertices, faces, provenance, labels, is_conjugate: conjugate }
}

/// The piece (`conjugate = false`) or conjugate piece over `grid`.
pub fn integrate_piece(grid: &DomainGrid, conjugate: bool, opts: &ContourOptions<f64>) -> Result<SurfaceMesh> {
    let ints = integrate_grid(grid, opts)?;
    Ok(piece_from_integrals(grid, &ints, conjugate))
}

#[derive(Debug, Clone)]
pub struct Pieces {
    pub piece: SurfaceMesh,
    pub conjugate: SurfaceMesh,
    pub integrals: GridIntegrals,
}

pub fn integrate_pieces(grid: &DomainGrid, opts: &ContourOptions<f64>) -> Result<Pieces> {
    let integrals = integrate_grid(grid, opts)?;
    Ok(Pieces {
        piece: piece_from_integrals(grid, &integrals, false),
        conjugate: piece_from_integrals(grid, &integrals, true),
        integrals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PieceStats {
    pub nodes: usize,
    pub edges: usize,
    pub max_cycle_residual: f64,
    pub evaluations: usize,
}

impl GridIntegrals {
    pub fn stats(&self) -> PieceStats {
        PieceStats {
            nodes: self.values.len(),
            edges: self.edge_count,
            max_cycle_residual: self.max_cycle_residual,
            evaluations: self.evaluations,
        }
    }
}
