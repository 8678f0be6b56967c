//! Sampling of the first-quadrant piece of the curve.
//!
//! The quadrant is parametrized by `u = rho + i theta` through
//! `z = -a coth(u / 2)`, which maps the half strip `rho < 0, 0 < theta < pi`
//! onto the open first quadrant with the end `z = a` at `rho = -infinity`:
//!
//! ```text
//! theta = pi       : z in (0, a)          (s2 then s1 as rho decreases)
//! theta = 0        : z in (a, infinity)   (s7, s6, s5, s4 as rho increases)
//! rho = 0          : positive imaginary axis (s3), z = infinity at theta = 0
//! rho = rho_min    : truncation arc around the end
//! ```
//!
//! Since `dh = dz/(z^2 - a^2) = du / (2a)`, steps in `rho` are equal steps in
//! height, and the grid is uniform in `theta` and piecewise uniform in `rho`
//! between break points at the images of `lambda, 1, lambda1, lambda2` and `r_max`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::algebraic::{DerivedConstants, FamilyParams};
use crate::error::{Error, Result};
use crate::riemann::RiemannSurface;
use crate::scalar::C;

type C64 = C<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Boundary {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    /// Truncation arc around the end.
    End,
}

impl Boundary {
    pub const CURVES: [Boundary; 7] =
        [Boundary::S1, Boundary::S2, Boundary::S3, Boundary::S4, Boundary::S5, Boundary::S6, Boundary::S7];

    pub fn name(self) -> &'static str {
        match self {
            Boundary::S1 => "s1",
            Boundary::S2 => "s2",
            Boundary::S3 => "s3",
            Boundary::S4 => "s4",
            Boundary::S5 => "s5",
            Boundary::S6 => "s6",
            Boundary::S7 => "s7",
            Boundary::End => "end",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

/// Set of boundary curves a node lies on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Labels(pub u8);

impl Labels {
    pub fn contains(self, b: Boundary) -> bool {
        self.0 & b.bit() != 0
    }

    pub fn insert(&mut self, b: Boundary) {
        self.0 |= b.bit();
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Regular,
    /// Zero of `g1` (`w = 0`).
    ZeroOfG1,
    /// Zero of `g2` (`w = infinity`).
    ZeroOfG2,
    /// `z = infinity`, where `w = 1`.
    Infinity,
}

impl NodeKind {
    pub fn is_singular(self) -> bool {
        self != NodeKind::Regular
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridNode {
    pub rho: f64,
    pub theta: f64,
    /// `None` at `z = infinity`.
    pub z: Option<C64>,
    pub kind: NodeKind,
    pub labels: Labels,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainGrid {
    pub surface: RiemannSurface<f64>,
    pub eps_end: f64,
    pub r_max: f64,
    pub resolution: usize,
    /// Increasing, from `rho_min` to `0`.
    pub rho: Vec<f64>,
    /// Increasing, from `0` to `pi`.
    pub theta: Vec<f64>,
    /// Row-major in `theta`: node `(i, j)` at `j * rho.len() + i`.
    pub nodes: Vec<GridNode>,
}

/// `z = -a coth(u/2)` with real or imaginary results kept exact on the
/// boundary lines `theta = 0`, `theta = pi` and `rho = 0`.
pub fn z_of_u(a: f64, rho: f64, theta: f64) -> C64 {
    if theta == 0.0 {
        C64::new(-a / (0.5 * rho).tanh(), 0.0)
    } else if theta == PI {
        C64::new(-a * (0.5 * rho).tanh(), 0.0)
    } else if rho == 0.0 {
        C64::new(0.0, a / (0.5 * theta).tan())
    } else {
        let h = C64::new(0.5 * rho, 0.5 * theta);
        -h.cosh() / h.sinh() * a
    }
}

/// `dz/du = a / (2 sinh^2(u/2))`.
pub fn dz_du(a: f64, rho: f64, theta: f64) -> C64 {
    if theta == 0.0 {
        let s = (0.5 * rho).sinh();
        C64::new(a / (2.0 * s * s), 0.0)
    } else if theta == PI {
        let c = (0.5 * rho).cosh();
        C64::new(-a / (2.0 * c * c), 0.0)
    } else if rho == 0.0 {
        let s = (0.5 * theta).sin();
        C64::new(-a / (2.0 * s * s), 0.0)
    } else {
        let s = C64::new(0.5 * rho, 0.5 * theta).sinh();
        (s * s * 2.0).inv() * a
    }
}

/// `rho` of a real point `z != a` of the closed quadrant boundary.
pub fn rho_of_real(a: f64, z: f64) -> f64 {
    ((z - a) / (z + a)).abs().ln()
}

/// Default truncation radius around the end.
pub fn default_eps_end(params: &FamilyParams<f64>, consts: &DerivedConstants<f64>) -> f64 {
    (consts.a - params.lambda).min(1.0 - consts.a) / 16.0
}

pub fn default_r_max(params: &FamilyParams<f64>) -> f64 {
    4.0 * params.lambda2
}

pub const MIN_RESOLUTION: usize = 8;

/// Builds the grid with `resolution` intervals in `theta` and about the same
/// spacing in `rho`.
pub fn build_domain_grid(params: FamilyParams<f64>, resolution: usize, eps_end: f64, r_max: f64) -> Result<DomainGrid> {
    let surface = RiemannSurface::new(params)?;
    let a = surface.consts.a;
    let (l, l1, l2) = (params.lambda, params.lambda1, params.lambda2);
    let eps_cap = (a - l).min(1.0 - a) / 4.0;
    if !(eps_end > 0.0 && eps_end < eps_cap) {
        return Err(Error::Parameter(format!("eps_end {eps_end} outside (0, {eps_cap})")));
    }
    if !(r_max > 2.0 * l2 && r_max.is_finite()) {
        return Err(Error::Parameter(format!("r_max {r_max} must exceed {}", 2.0 * l2)));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::Parameter(format!("resolution {resolution} below {MIN_RESOLUTION}")));
    }

    // every node keeps |z - a| >= eps_end
    let rho_min = (eps_end / (2.0 * a - eps_end)).ln();
    let rho_l = rho_of_real(a, l);
    let rho_1 = rho_of_real(a, 1.0);
    let rho_l1 = rho_of_real(a, l1);
    let rho_l2 = rho_of_real(a, l2);
    let rho_r = rho_of_real(a, r_max);
    let mut breaks = vec![rho_min, rho_l, rho_1, rho_l1, rho_l2, rho_r, 0.0];
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-12);

    let n = resolution as f64;
    let mut rho = vec![breaks[0]];
    for w in breaks.windows(2) {
        let count = ((n * (w[1] - w[0]) / PI).round() as usize).max(2);
        for k in 1..count {
            rho.push(w[0] + (w[1] - w[0]) * k as f64 / count as f64);
        }
        rho.push(w[1]);
    }
    let theta: Vec<f64> = (0..=resolution)
        .map(|j| if j == resolution { PI } else { PI * j as f64 / n })
        .collect();

    let find = |r: f64| rho.iter().position(|&x| (x - r).abs() < 1e-12).expect("break point in grid");
    let (i_l, i_1, i_l1, i_l2) = (find(rho_l), find(rho_1), find(rho_l1), find(rho_l2));
    let n_rho = rho.len();
    let last_i = n_rho - 1;
    let last_j = resolution;

    let mut nodes = Vec::with_capacity(n_rho * theta.len());
    for (j, &th) in theta.iter().enumerate() {
        for (i, &r) in rho.iter().enumerate() {
            let mut labels = Labels::default();
            let mut kind = NodeKind::Regular;
            let mut z = Some(z_of_u(a, r, th));
            if j == last_j {
                if i >= i_l {
                    labels.insert(Boundary::S2);
                }
                if i <= i_l {
                    labels.insert(Boundary::S1);
                }
                if i == i_l {
                    kind = NodeKind::ZeroOfG1;
                    z = Some(C64::new(l, 0.0));
                }
                if i == last_i {
                    z = Some(C64::new(0.0, 0.0));
                }
            }
            if j == 0 {
                if i <= i_1 {
                    labels.insert(Boundary::S7);
                }
                if i >= i_1 && i <= i_l1 {
                    labels.insert(Boundary::S6);
                }
                if i >= i_l1 && i <= i_l2 {
                    labels.insert(Boundary::S5);
                }
                if i >= i_l2 {
                    labels.insert(Boundary::S4);
                }
                let exact = [(i_1, 1.0, NodeKind::ZeroOfG2), (i_l1, l1, NodeKind::ZeroOfG1), (i_l2, l2, NodeKind::ZeroOfG2)];
                for (idx, x, k) in exact {
                    if i == idx {
                        kind = k;
                        z = Some(C64::new(x, 0.0));
                    }
                }
                if i == last_i {
                    kind = NodeKind::Infinity;
                    z = None;
                }
            }
            if i == last_i {
                labels.insert(Boundary::S3);
            }
            if i == 0 {
                labels.insert(Boundary::End);
            }
            nodes.push(GridNode { rho: r, theta: th, z, kind, labels });
        }
    }
    Ok(DomainGrid { surface, eps_end, r_max, resolution, rho, theta, nodes })
}

impl DomainGrid {
    pub fn n_rho(&self) -> usize {
        self.rho.len()
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.rho.len() + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.rho.len(), idx / self.rho.len())
    }

    /// Neighbors in the fixed order `-rho, +rho, -theta, +theta`.
    pub fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (i, j) = self.coords(idx);
        let (ni, nj) = (self.n_rho(), self.n_theta());
        [
            (i > 0).then(|| self.index(i - 1, j)),
            (i + 1 < ni).then(|| self.index(i + 1, j)),
            (j > 0).then(|| self.index(i, j - 1)),
            (j + 1 < nj).then(|| self.index(i, j + 1)),
        ]
        .into_iter()
        .flatten()
    }

    /// All edges `(p, q)` with `p < q`: first along `rho`, then along `theta`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let (ni, nj) = (self.n_rho(), self.n_theta());
        let mut out = Vec::with_capacity(2 * ni * nj);
        for j in 0..nj {
            for i in 0..ni - 1 {
                out.push((self.index(i, j), self.index(i + 1, j)));
            }
        }
        for j in 0..nj - 1 {
            for i in 0..ni {
                out.push((self.index(i, j), self.index(i, j + 1)));
            }
        }
        out
    }

    /// Cells as corner lists counterclockwise in the `(rho, theta)` plane.
    pub fn cells(&self) -> Vec<[usize; 4]> {
        let (ni, nj) = (self.n_rho(), self.n_theta());
        let mut out = Vec::with_capacity(ni * nj);
        for j in 0..nj - 1 {
            for i in 0..ni - 1 {
                out.push([self.index(i, j), self.index(i + 1, j), self.index(i + 1, j + 1), self.index(i, j + 1)]);
            }
        }
        out
    }

    /// Node indices carrying `label`, in increasing grid order.
    pub fn boundary_nodes(&self, label: Boundary) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&k| self.nodes[k].labels.contains(label)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(res: usize) -> DomainGrid {
        let p = FamilyParams::new(0.5, 1.145_907_463_579_458_8, 3.433_933_732_290_624_6).unwrap();
        let s = RiemannSurface::new(p).unwrap();
        build_domain_grid(p, res, default_eps_end(&p, &s.consts), default_r_max(&p)).unwrap()
    }

    #[test]
    fn map_matches_formula() {
        let a = 0.8;
        for &(r, t) in &[(-1.0, 0.7), (-0.3, 2.9), (-2.0, 0.1)] {
            let z = z_of_u(a, r, t);
            let e = C64::new(r, t).exp();
            let direct = (e + 1.0) / (-e + 1.0) * a;
            assert!((z - direct).norm() < 1e-13);
            assert!(z.re > 0.0 && z.im > 0.0);
            let h = 1e-6;
            let fd = (z_of_u(a, r + h, t) - z_of_u(a, r - h, t)) / (2.0 * h);
            assert!((fd - dz_du(a, r, t)).norm() < 1e-6);
        }
        for &(r, t) in &[(-1.0, 0.0), (-1.0, PI), (0.0, 1.0)] {
            let z = z_of_u(a, r, t);
            let h = C64::new(0.5 * r, 0.5 * t);
            let generic = -h.cosh() / h.sinh() * a;
            assert!((z - generic).norm() < 1e-12);
            let s = h.sinh();
            assert!((dz_du(a, r, t) - (s * s * 2.0).inv() * a).norm() < 1e-12);
        }
    }

    #[test]
    fn labels_match_segments() {
        let g = grid(32);
        let (a, l, l1, l2) = (g.surface.consts.a, 0.5, g.surface.params.lambda1, g.surface.params.lambda2);
        for n in &g.nodes {
            let Some(z) = n.z else {
                assert_eq!(n.kind, NodeKind::Infinity);
                continue;
            };
            let on_real = z.im == 0.0;
            let x = z.re;
            let tol = 1e-12;
            let checks = [
                (Boundary::S1, on_real && x >= l - tol && x < a),
                (Boundary::S2, on_real && x >= 0.0 && x <= l + tol),
                (Boundary::S3, z.re == 0.0 && z.im >= 0.0),
                (Boundary::S4, on_real && x >= l2 - tol),
                (Boundary::S5, on_real && x >= l1 - tol && x <= l2 + tol),
                (Boundary::S6, on_real && x >= 1.0 - tol && x <= l1 + tol),
                (Boundary::S7, on_real && x > a && x <= 1.0 + tol),
            ];
            for (b, member) in checks {
                assert_eq!(n.labels.contains(b), member, "{b:?} at {z}");
            }
            assert!((z - a).norm() >= g.eps_end * (1.0 - 1e-12));
        }
    }

    #[test]
    fn special_nodes() {
        let g = grid(16);
        let count = |k| g.nodes.iter().filter(|n| n.kind == k).count();
        assert_eq!(count(NodeKind::ZeroOfG1), 2);
        assert_eq!(count(NodeKind::ZeroOfG2), 2);
        assert_eq!(count(NodeKind::Infinity), 1);
        // no edge joins two singular nodes
        for (p, q) in g.edges() {
            assert!(!(g.nodes[p].kind.is_singular() && g.nodes[q].kind.is_singular()));
        }
        assert_eq!(g.cells().len(), (g.n_rho() - 1) * (g.n_theta() - 1));
    }

    #[test]
    fn end_spacing_is_geometric() {
        let g = grid(32);
        let a = g.surface.consts.a;
        // first two rho columns on the theta = 0 row
        let d0 = g.nodes[g.index(0, 0)].z.unwrap().re - a;
        let d1 = g.nodes[g.index(1, 0)].z.unwrap().re - a;
        let ratio = (g.rho[1] - g.rho[0]).exp();
        assert!(((d1 / d0) - ratio).abs() < 0.05 * ratio);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = FamilyParams::new(0.5, 2.0, 3.0).unwrap();
        assert!(build_domain_grid(p, 32, 0.5, 12.0).is_err());
        assert!(build_domain_grid(p, 32, 0.001, 5.0).is_err());
        assert!(build_domain_grid(p, 4, 0.001, 12.0).is_err());
    }
}
