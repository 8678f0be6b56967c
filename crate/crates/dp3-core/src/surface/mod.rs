//! Fundamental piece, conjugate piece, full surface and mesh output.

pub mod assemble;
pub mod export;
pub mod grid;
pub mod mesh;
pub mod piece;

pub use assemble::{assemble_surface, symmetry_planes, AssemblyReport, SymmetryPlanes};
pub use export::{export_mesh, MeshFormat};
pub use grid::{build_domain_grid, Boundary, DomainGrid, NodeKind};
pub use mesh::SurfaceMesh;
pub use piece::{integrate_piece, integrate_pieces, Pieces};

use crate::error::Result;
use crate::period::SolveResult;
use crate::quadrature::ContourOptions;

pub const DEFAULT_RESOLUTION: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub resolution: usize,
    /// Defaults to [`grid::default_eps_end`].
    pub eps_end: Option<f64>,
    /// Defaults to [`grid::default_r_max`].
    pub r_max: Option<f64>,
    pub contour: ContourOptions<f64>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { resolution: DEFAULT_RESOLUTION, eps_end: None, r_max: None, contour: ContourOptions::default() }
    }
}

impl BuildOptions {
    pub fn with_resolution(resolution: usize) -> Self {
        Self { resolution, ..Self::default() }
    }
}

/// Grid plus piece and conjugate piece for a solved parameter triple.
#[derive(Debug, Clone)]
pub struct BuiltPiece {
    pub grid: DomainGrid,
    pub pieces: Pieces,
}

pub fn build_piece(result: &SolveResult<f64>, opts: &BuildOptions) -> Result<BuiltPiece> {
    let p = result.params;
    let eps = opts.eps_end.unwrap_or_else(|| grid::default_eps_end(&p, &result.constants));
    let r_max = opts.r_max.unwrap_or_else(|| grid::default_r_max(&p));
    let grid = build_domain_grid(p, opts.resolution, eps, r_max)?;
    let pieces = integrate_pieces(&grid, &opts.contour)?;
    Ok(BuiltPiece { grid, pieces })
}
