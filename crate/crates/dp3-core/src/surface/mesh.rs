//! Triangle meshes with per-vertex provenance.

use serde::Serialize;

use crate::scalar::C;

use super::grid::{Boundary, Labels};

type C64 = C<f64>;

/// Where a vertex comes from: grid node, copy index and the curve point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub node: usize,
    pub copy: u32,
    #[serde(skip)]
    pub z: Option<C64>,
    #[serde(skip)]
    pub w: Option<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub provenance: Vec<Provenance>,
    pub labels: Vec<Labels>,
    pub is_conjugate: bool,
}

pub fn sub(p: [f64; 3], q: [f64; 3]) -> [f64; 3] {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

pub fn dot(p: [f64; 3], q: [f64; 3]) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

pub fn cross(p: [f64; 3], q: [f64; 3]) -> [f64; 3] {
    [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]]
}

pub fn norm(p: [f64; 3]) -> f64 {
    dot(p, p).sqrt()
}

impl SurfaceMesh {
    pub fn bounding_box(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        norm(sub(hi, lo))
    }

    pub fn face_area(&self, f: [usize; 3]) -> f64 {
        let [a, b, c] = f.map(|i| self.vertices[i]);
        0.5 * norm(cross(sub(b, a), sub(c, a)))
    }

    /// Smallest face area relative to the squared diameter.
    pub fn min_relative_area(&self) -> f64 {
        let d = self.diameter();
        self.faces.iter().map(|&f| self.face_area(f)).fold(f64::INFINITY, f64::min) / (d * d)
    }

    /// Vertices on `label`, in mesh order.
    pub fn boundary_vertices(&self, label: Boundary) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&k| self.labels[k].contains(label)).collect()
    }

    /// Every undirected edge with the number of faces using it.
    pub fn edge_counts(&self) -> std::collections::BTreeMap<(usize, usize), usize> {
        let mut m = std::collections::BTreeMap::new();
        for f in &self.faces {
            for k in 0..3 {
                let (p, q) = (f[k], f[(k + 1) % 3]);
                *m.entry((p.min(q), p.max(q))).or_insert(0) += 1;
            }
        }
        m
    }

    /// No edge is shared by more than two faces and no directed edge repeats
    /// (consistent orientation).
    pub fn is_manifold(&self) -> bool {
        if self.edge_counts().values().any(|&c| c > 2) {
            return false;
        }
        let mut directed = std::collections::BTreeSet::new();
        self.faces.iter().all(|f| (0..3).all(|k| directed.insert((f[k], f[(k + 1) % 3]))))
    }

    /// Number of connected components of the face graph.
    pub fn components(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for f in &self.faces {
            for k in 1..3 {
                let (a, b) = (find(&mut parent, f[0]), find(&mut parent, f[k]));
                parent[a] = b;
            }
        }
        let mut used = vec![false; n];
        for f in &self.faces {
            for &v in f {
                used[v] = true;
            }
        }
        let mut roots: Vec<usize> = (0..n).filter(|&v| used[v]).map(|v| find(&mut parent, v)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Vertices that lie on no boundary curve and no truncation arc and
    /// are not on the outer rim of the mesh.
    pub fn interior_vertices(&self) -> Vec<usize> {
        let mut rim = vec![false; self.vertices.len()];
        for ((p, q), c) in self.edge_counts() {
            if c == 1 {
                rim[p] = true;
                rim[q] = true;
            }
        }
        (0..self.vertices.len()).filter(|&k| !rim[k] && self.labels[k].is_empty()).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn square() -> SurfaceMesh {
        SurfaceMesh {
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            faces: vec![[0, 1, 2], [0, 2, 3]],
            provenance: (0..4).map(|k| Provenance { node: k, copy: 0, z: None, w: None }).collect(),
            labels: vec![Labels::default(); 4],
            is_conjugate: false,
        }
    }

    #[test]
    fn square_properties() {
        let m = square();
        assert!(m.is_manifold());
        assert_eq!(m.components(), 1);
        assert!((m.face_area([0, 1, 2]) - 0.5).abs() < 1e-15);
        assert!((m.diameter() - 2f64.sqrt()).abs() < 1e-15);
        assert!(m.interior_vertices().is_empty());
    }

    #[test]
    fn detects_inconsistent_winding() {
        let mut m = square();
        m.faces[1] = [0, 3, 2];
        assert!(!m.is_manifold());
    }
}
