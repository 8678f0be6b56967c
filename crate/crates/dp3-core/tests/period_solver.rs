use dp3_core::period::{asymptotic_checks, sign_field, solve_period_problem, GridSpec, PeriodOptions, DEFAULT_QUAD_TOL};

/// `(lambda, lambda1*, lambda2*, v2)` from a 50-digit oracle (cosine
/// substitution quadrature, bisection then secant polish).
const SOLUTIONS: [(f64, f64, f64, f64); 10] = [
    (0.1, 1.040_140_499_866_284_068, 17.970_027_796_323_844_934, 1.337_642_259_699_959_704_9),
    (0.2, 1.076_123_429_041_054_286_6, 9.067_340_959_933_851_152_4, 2.023_314_862_163_494_813_1),
    (0.3, 1.106_936_459_229_715_805, 6.026_269_054_567_528_633_5, 2.470_708_885_426_816_971_4),
    (0.4, 1.130_922_103_747_425_606_1, 4.441_750_498_981_845_824_4, 2.774_109_183_372_092_545_1),
    (0.5, 1.145_907_463_579_458_820_4, 3.433_933_732_290_624_578_4, 2.978_758_767_116_367_787),
    (0.6, 1.149_076_244_107_225_980_7, 2.709_808_199_062_533_408_5, 3.110_516_268_245_177_660_9),
    (0.7, 1.136_972_485_298_347_123_4, 2.144_996_688_353_184_515_8, 3.185_053_593_031_645_573_8),
    (0.8, 1.106_316_652_921_290_005_1, 1.681_649_482_371_674_840_9, 3.211_600_119_845_816_132_5),
    (0.9, 1.057_388_776_704_475_818_8, 1.298_773_902_465_268_557_1, 3.195_311_830_227_421_686_7),
    (0.99, 1.005_634_729_693_386_871_4, 1.025_839_896_662_944_217_3, 3.148_379_428_094_499_446_2),
];

#[test]
fn solutions_match_oracle() {
    for &(l, l1, l2, v2) in &SOLUTIONS {
        let r = solve_period_problem(l, &PeriodOptions::default()).unwrap();
        assert!(r.residuals.xi1.abs() < 1e-9 && r.residuals.xi2.abs() < 1e-9, "lambda {l}: {:?}", r.residuals);
        assert!((r.params.lambda1 - l1).abs() < 1e-7 * l1, "lambda {l}: {} vs {l1}", r.params.lambda1);
        assert!((r.params.lambda2 - l2).abs() < 1e-7 * l2, "lambda {l}: {} vs {l2}", r.params.lambda2);
        assert!((r.lattice.v2y - v2).abs() < 1e-7, "lambda {l}: {} vs {v2}", r.lattice.v2y);
        assert!(r.further_c2_brackets.is_empty());
    }
}

#[test]
fn sign_fields_have_expected_structure() {
    for i in 1..=9 {
        let l = i as f64 / 10.0;
        let f = sign_field(l, &GridSpec::default(), DEFAULT_QUAD_TOL).unwrap();
        assert!(f.xi2_positive_near_diagonal(), "lambda {l}");
        assert!(f.xi2_negative_far(), "lambda {l}");
        assert!(f.xi1_changes_sign(), "lambda {l}");
        assert!(f.zero_curves_intersect(), "lambda {l}");
    }
}

#[test]
fn asymptotics_for_several_lambdas() {
    for l in [0.2, 0.5, 0.8] {
        let r = asymptotic_checks(l, DEFAULT_QUAD_TOL).unwrap();
        assert!(r.xi1_near_one.decreasing, "{l}: {:?}", r.xi1_near_one);
        assert!(r.xi2_diagonal_slope.decreasing, "{l}: {:?}", r.xi2_diagonal_slope);
        assert!(r.xi2_near_one.decreasing, "{l}: {:?}", r.xi2_near_one);
    }
}
