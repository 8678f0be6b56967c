//! Eight reflected copies of the piece, tiled by the lattice.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::period::Lattice;

use super::grid::Boundary;
use super::mesh::{norm, sub, Provenance, SurfaceMesh};

/// Weld mismatch above which the assembly is rejected.
pub const WELD_TOL: f64 = 1e-6;

/// Offsets of the coordinate planes containing the boundary curves:
/// `x1 = c1` (S1), `x2 = c2` (S2), `x3 = c3` (S3), `x2 = c4` (S4, S6),
/// `x1 = c5` (S5, S7).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryPlanes {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

fn mean_coord(mesh: &SurfaceMesh, label: Boundary, k: usize) -> f64 {
    let vs = mesh.boundary_vertices(label);
    vs.iter().map(|&v| mesh.vertices[v][k]).sum::<f64>() / vs.len() as f64
}

pub fn symmetry_planes(piece: &SurfaceMesh) -> SymmetryPlanes {
    SymmetryPlanes {
        c1: mean_coord(piece, Boundary::S1, 0),
        c2: mean_coord(piece, Boundary::S2, 1),
        c3: mean_coord(piece, Boundary::S3, 2),
        c4: mean_coord(piece, Boundary::S4, 1),
        c5: mean_coord(piece, Boundary::S5, 0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssemblyReport {
    pub planes: SymmetryPlanes,
    /// Translations along `x1` and `x2` between neighboring cells.
    pub translation: [f64; 2],
    pub max_weld_mismatch: f64,
    pub welded: usize,
}

/// Reflections `e` (bit k: `x_k -> 2 c_k - x_k`) applied to the piece in cell `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    i: usize,
    j: usize,
    e: u8,
    node: usize,
}

fn canonical(mut k: Key, on: impl Fn(Boundary) -> bool) -> Key {
    let on_x1_wall = on(Boundary::S5) || on(Boundary::S7);
    let on_x2_wall = on(Boundary::S4) || on(Boundary::S6);
    loop {
        let before = k;
        if on(Boundary::S1) {
            k.e &= !1;
        }
        if on(Boundary::S2) {
            k.e &= !2;
        }
        if on(Boundary::S3) {
            k.e &= !4;
        }
        if on_x1_wall && k.e & 1 != 0 && k.i > 0 {
            k.e &= !1;
            k.i -= 1;
        }
        if on_x2_wall && k.e & 2 != 0 && k.j > 0 {
            k.e &= !2;
            k.j -= 1;
        }
        if k == before {
            return k;
        }
    }
}

/// Assembles `copies.0 x copies.1` cells of the eight-piece fundamental domain.
///
/// Copies are identified along the boundary curves topologically; the
/// distance between identified vertices is checked against [`WELD_TOL`].
pub fn assemble_surface(piece: &SurfaceMesh, copies: (usize, usize), lattice: &Lattice<f64>) -> Result<(SurfaceMesh, AssemblyReport)> {
    if piece.is_conjugate {
        return Err(Error::Parameter("assembly needs the non-conjugate piece".into()));
    }
    if copies.0 == 0 || copies.1 == 0 {
        return Err(Error::Parameter(format!("copies must be at least 1x1, got {}x{}", copies.0, copies.1)));
    }
    let planes = symmetry_planes(piece);
    let c = [planes.c1, planes.c2, planes.c3];
    let t1 = lattice.v1x.copysign(planes.c5 - planes.c1);
    let t2 = lattice.v2y.copysign(planes.c4 - planes.c2);

    let n = piece.vertices.len();
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut provenance = Vec::new();
    let mut labels = Vec::new();
    let mut faces = Vec::new();
    let mut max_weld_mismatch = 0.0f64;
    let mut welded = 0usize;
    let mut copy = 0u32;
    for j in 0..copies.1 {
        for i in 0..copies.0 {
            for e in 0u8..8 {
                let mut local = Vec::with_capacity(n);
                for node in 0..n {
                    let mut x = piece.vertices[node];
                    for k in 0..3 {
                        if e & (1 << k) != 0 {
                            x[k] = 2.0 * c[k] - x[k];
                        }
                    }
                    x[0] += i as f64 * t1;
                    x[1] += j as f64 * t2;
                    let key = canonical(Key { i, j, e, node }, |b| piece.labels[node].contains(b));
                    let id = match index.get(&key) {
                        Some(&id) => {
                            max_weld_mismatch = max_weld_mismatch.max(norm(sub(vertices[id], x)));
                            welded += 1;
                            id
                        }
                        None => {
                            let id = vertices.len();
                            index.insert(key, id);
                            vertices.push(x);
                            provenance.push(Provenance { copy, ..piece.provenance[node] });
                            labels.push(piece.labels[node]);
                            id
                        }
                    };
                    local.push(id);
                }
                let flip = e.count_ones() % 2 == 1;
                for f in &piece.faces {
                    let g = f.map(|v| local[v]);
                    faces.push(if flip { [g[0], g[2], g[1]] } else { g });
                }
                copy += 1;
            }
        }
    }
    if max_weld_mismatch > WELD_TOL {
        return Err(Error::WeldFailure(max_weld_mismatch));
    }
    let mesh = SurfaceMesh { vertices, faces, provenance, labels, is_conjugate: false };
    let report = AssemblyReport { planes, translation: [t1, t2], max_weld_mismatch, welded };
    Ok((mesh, report))
}
