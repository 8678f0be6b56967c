use dp3_core::algebraic::{check_ab_identities, derive_constants, eval_g, eval_g_sum_factored, FamilyParams, Quartic};
use dp3_core::path::{reverse_path, Segment};
use dp3_core::quadrature::{integrate_contour, integrate_endpoint_singular, ContourOptions, SingularIntegral};
use dp3_core::riemann::{Automorphism, CurvePoint, LoopLabel, RiemannSurface};
use dp3_core::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = FamilyParams<f64>> {
    (0.01f64..0.99, -7.0f64..4.0, -7.0f64..4.0)
        .prop_map(|(l, d1, d2)| {
            let l1 = 1.0 + d1.exp();
            FamilyParams::new(l, l1, l1 * (1.0 + d2.exp())).unwrap()
        })
}

fn moderate_params() -> impl Strategy<Value = FamilyParams<f64>> {
    (0.1f64..0.9, 0.2f64..3.0, 0.2f64..3.0).prop_map(|(l, d1, d2)| FamilyParams::new(l, 1.0 + d1, 1.0 + d1 + d2).unwrap())
}

fn upper_point() -> impl Strategy<Value = Complex64> {
    (-4.0f64..4.0, 0.3f64..3.0).prop_map(|(x, y)| Complex64::new(x, y))
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn constants_satisfy_identities(p in params()) {
        let k = derive_constants(&p).unwrap();
        let r = check_ab_identities(&p);
        prop_assert!(r.pass, "{r:?}");
        prop_assert!(r.max_residual < 1e-12);
        prop_assert!(rel(k.a2() * k.b2(), p.product()) < 1e-10);
        prop_assert!(rel(k.a2() + k.b2(), k.alpha) < 1e-10);
    }

    #[test]
    fn quartics_are_reflections(p in params(), x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let z = Complex64::new(x, y);
        let (g1, g2) = (eval_g(Quartic::G1, -z, &p), eval_g(Quartic::G2, z, &p));
        let scale = 1.0 + g1.norm();
        prop_assert!((g1 - g2).norm() <= 1e-12 * scale);
        let k = derive_constants(&p).unwrap();
        let sum = eval_g(Quartic::G1, z, &p) + eval_g(Quartic::G2, z, &p);
        prop_assert!((sum - eval_g_sum_factored(z, &k)).norm() <= 1e-10 * (1.0 + sum.norm() + 2.0 * z.norm_sqr().powi(2)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn continuation_closes_around_cut_pairs(p in moderate_params(), k in 0usize..3) {
        let s = RiemannSurface::new(p).unwrap();
        let lp = s.homology_loop(LoopLabel::ALL[k]).unwrap();
        let mut w = lp.start.w;
        for seg in &lp.path {
            w = s.continue_segment(seg, w).unwrap();
        }
        prop_assert!((w - lp.start.w).norm() < 1e-9 * (1.0 + w.norm()));
    }

    #[test]
    fn reversed_path_negates_integrals(p in moderate_params(), z0 in upper_point(), z1 in upper_point()) {
        let s = RiemannSurface::new(p).unwrap();
        let start = s.from_infinity(z0).unwrap();
        let path = vec![Segment::line(z0, z1)];
        let opts = ContourOptions::default();
        let fwd = integrate_contour(&s, &path, start.w, &opts).unwrap();
        let back = integrate_contour(&s, &reverse_path(&path), fwd.end_w.unwrap(), &opts).unwrap();
        prop_assert!((back.end_w.unwrap() - start.w).norm() < 1e-9);
        for c in 0..3 {
            prop_assert!((fwd.integrals[c] + back.integrals[c]).norm() < 1e-9 * (1.0 + fwd.integrals[c].norm()));
        }
    }

    #[test]
    fn automorphism_pullbacks(p in moderate_params(), z0 in upper_point(), z1 in upper_point(), k in 0usize..3) {
        let s = RiemannSurface::new(p).unwrap();
        let tau = Automorphism::ALL[k];
        let start = s.from_infinity(z0).unwrap();
        let seg = Segment::line(z0, z1);
        let opts = ContourOptions::default();
        let direct = integrate_contour(&s, &[seg], start.w, &opts).unwrap();
        let image: CurvePoint<f64> = tau.apply(start).unwrap();
        let mapped = integrate_contour(&s, &[tau.map_segment(&seg)], image.w, &opts).unwrap();
        let expected = tau.transform_integrals(direct.integrals);
        for c in 0..3 {
            prop_assert!((mapped.integrals[c] - expected[c]).norm() < 1e-9 * (1.0 + expected[c].norm()));
        }
    }

    #[test]
    fn endpoint_singular_rules(lo in -3.0f64..3.0, len in 1e-3f64..10.0, tol_exp in 6i32..13) {
        let hi = lo + len;
        let tol = 10f64.powi(-tol_exp);
        let arcsine = SingularIntegral::new(lo, hi, tol, |_t: f64, dl: f64, dh: f64| 1.0 / (dl * dh).sqrt());
        let r = integrate_endpoint_singular(&arcsine).unwrap();
        prop_assert!((r.value - std::f64::consts::PI).abs() < 10.0 * tol.max(1e-14));
        let half_disc = SingularIntegral::new(lo, hi, tol, |_t: f64, dl: f64, dh: f64| (dl * dh).sqrt());
        let r = integrate_endpoint_singular(&half_disc).unwrap();
        let exact = std::f64::consts::PI * len * len / 8.0;
        prop_assert!((r.value - exact).abs() < 10.0 * tol.max(1e-14) * exact.max(1.0));
    }
}
