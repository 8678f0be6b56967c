use dp3_core::algebraic::FamilyParams;
use dp3_core::period::{solve_period_problem, PeriodOptions, SolveResult};
use dp3_core::surface::{build_piece, BuildOptions};
use dp3_core::verify::minimality::{curvature_stats, doubled_conjugate, projection_stats};
use dp3_core::verify::{verify_minimality_and_graph, verify_periods, verify_residues, verify_symmetries, Quantity};

fn solved(l: f64) -> SolveResult<f64> {
    solve_period_problem(l, &PeriodOptions::<f64>::default()).unwrap()
}

fn measured(q: &Quantity) -> f64 {
    match q {
        Quantity::Scalar(x) => x.0,
        Quantity::Vector(v) => v[0].0,
    }
}

#[test]
fn periods_close_at_solutions() {
    for l in [0.2, 0.5, 0.8] {
        let r = verify_periods(&solved(l)).unwrap();
        for c in &r.checks {
            assert!(c.pass, "{l}: {c:?}");
        }
    }
}

#[test]
fn residue_modulus_at_reference_point() {
    let p = FamilyParams::new(0.5, 2.0, 3.0).unwrap();
    let r = verify_residues(&p).unwrap();
    assert!(r.pass());
    let a = dp3_core::algebraic::derive_constants(&p).unwrap().a;
    assert!((a - 0.7419637).abs() < 1e-7);
    let m = measured(&r.get("end_+a_+i_res_phi1_modulus").unwrap().measured);
    assert!((m - 1.0 / (2.0 * a)).abs() < 1e-9, "{m}");
    assert!((m - 0.6738873).abs() < 1e-7, "{m}");
}

#[test]
fn symmetries_at_half() {
    let res = solved(0.5);
    let built = build_piece(&res, &BuildOptions::with_resolution(64)).unwrap();
    let r = verify_symmetries(&built, &res.lattice).unwrap();
    for c in &r.checks {
        assert!(c.pass, "{c:?}");
    }
}

#[test]
fn graph_and_regularity_at_half() {
    let res = solved(0.5);
    let fine = build_piece(&res, &BuildOptions::with_resolution(64)).unwrap();
    let coarse = build_piece(&res, &BuildOptions::with_resolution(32)).unwrap();
    let ps = projection_stats(&doubled_conjugate(&fine.pieces.conjugate));
    assert_eq!(ps.positive.min(ps.negative), 0);
    assert_eq!(ps.overlaps, 0);
    assert!(ps.degenerate * 20 < ps.positive + ps.negative);
    let r = verify_minimality_and_graph(&fine, &coarse).unwrap();
    for name in [
        "mean_curvature_times_edge",
        "mean_curvature_observed_order",
        "metric_factor_min",
        "metric_factor_max",
        "doubled_conjugate_oriented",
        "projection_orientation",
        "projection_overlaps",
        "triangle_condition",
    ] {
        let c = r.get(name).unwrap();
        assert!(c.pass, "{c:?}");
    }
    let (c, f) = (curvature_stats(&coarse), curvature_stats(&fine));
    assert!(f.max_h < c.max_h);
}
