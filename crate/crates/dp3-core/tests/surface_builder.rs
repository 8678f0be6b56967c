use dp3_core::algebraic::FamilyParams;
use dp3_core::period::{solve_period_problem, PeriodOptions, SolveResult};
use dp3_core::quadrature::ContourOptions;
use dp3_core::surface::grid::{default_eps_end, default_r_max};
use dp3_core::surface::export::parse_obj;
use dp3_core::surface::{assemble_surface, build_domain_grid, export_mesh, integrate_pieces, Boundary, DomainGrid, MeshFormat, Pieces, SurfaceMesh};
use dp3_core::verify::symmetry::plane_axis;

fn solved(l: f64) -> SolveResult<f64> {
    solve_period_problem(l, &PeriodOptions::<f64>::default()).unwrap()
}

fn grid_for(r: &SolveResult<f64>, res: usize) -> DomainGrid {
    let p: FamilyParams<f64> = r.params;
    build_domain_grid(p, res, default_eps_end(&p, &r.constants), default_r_max(&p)).unwrap()
}

fn pieces(r: &SolveResult<f64>, res: usize) -> (DomainGrid, Pieces) {
    let g = grid_for(r, res);
    let p = integrate_pieces(&g, &ContourOptions::default()).unwrap();
    (g, p)
}

#[test]
fn height_is_exact_log_primitive() {
    let r = solved(0.5);
    let (g, p) = pieces(&r, 32);
    let a = r.constants.a;
    let mut worst = 0.0f64;
    for (k, n) in g.nodes.iter().enumerate() {
        worst = worst.max((p.piece.vertices[k][2] - n.rho / (2.0 * a)).abs());
    }
    eprintln!("stats {:?} worst {worst:e}", p.integrals.stats());
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn end_growth_under_halved_truncation() {
    let r = solved(0.5);
    let p = r.params;
    let a = r.constants.a;
    let eps = default_eps_end(&p, &r.constants);
    let opts = ContourOptions::default();
    let max_h = |e: f64| {
        let g = build_domain_grid(p, 16, e, default_r_max(&p)).unwrap();
        let m = integrate_pieces(&g, &opts).unwrap().piece;
        m.vertices.iter().map(|v| v[2].abs()).fold(0.0, f64::max)
    };
    let grow = max_h(eps / 2.0) - max_h(eps);
    let target = (2.0f64).ln() / (2.0 * a);
    assert!((grow - target).abs() < 0.02 * target, "{grow} vs {target}");
}

#[test]
fn boundary_planes_and_lines() {
    let r = solved(0.5);
    let (_, p) = pieces(&r, 32);
    let d = p.piece.diameter();
    let spread = |m: &SurfaceMesh, b: Boundary, k: usize| {
        let xs: Vec<f64> = m.boundary_vertices(b).iter().map(|&v| m.vertices[v][k]).collect();
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - xs.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    for b in Boundary::CURVES {
        let k = plane_axis(b);
        assert!(spread(&p.piece, b, k) < 1e-9 * d, "{b:?}");
    }
    let dc = p.conjugate.diameter();
    for b in Boundary::CURVES {
        let k = plane_axis(b);
        for c in (0..3).filter(|&c| c != k) {
            assert!(spread(&p.conjugate, b, c) < 1e-9 * dc, "{b:?}* along x{}", c + 1);
        }
        assert!(spread(&p.conjugate, b, k) > 1e-3 * dc, "{b:?}* degenerate");
    }
}

#[test]
fn figure_parameters_give_manifold_meshes() {
    for l in [0.4, 0.9, 0.99] {
        let r = solved(l);
        let (_, p) = pieces(&r, 24);
        let (m, rep) = assemble_surface(&p.piece, (2, 1), &r.lattice).unwrap();
        assert!(m.is_manifold(), "{l}");
        assert_eq!(m.components(), 1, "{l}");
        assert!(rep.max_weld_mismatch < 1e-6, "{l}: {}", rep.max_weld_mismatch);
        let obj = export_mesh(&m, MeshFormat::Obj).unwrap();
        let (vs, fs) = parse_obj(std::str::from_utf8(&obj).unwrap()).unwrap();
        assert_eq!(fs, m.faces);
        for (a, b) in vs.iter().zip(&m.vertices) {
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() <= 1e-6 * b[k].abs().max(1.0));
            }
        }
    }
}

#[test]
fn assembly_welds() {
    let r = solved(0.5);
    let (_, p) = pieces(&r, 16);
    let (m, rep) = assemble_surface(&p.piece, (1, 1), &r.lattice).unwrap();
    eprintln!("{rep:?} v {} (piece {})", m.vertices.len(), p.piece.vertices.len());
    assert!(m.is_manifold());
    assert_eq!(m.components(), 1);
    let (m2, rep2) = assemble_surface(&p.piece, (2, 2), &r.lattice).unwrap();
    assert!(m2.is_manifold());
    assert_eq!(m2.components(), 1);
    assert!(rep2.max_weld_mismatch < 1e-6);
}
