//! Periods over the homology loops and around the four ends.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::algebraic::FamilyParams;
use crate::error::Result;
use crate::path::Segment;
use crate::period::SolveResult;
use crate::quadrature::contour::integrate_loop;
use crate::quadrature::{integrate_contour, ContourOptions};
use crate::riemann::{LoopLabel, RiemannSurface};
use crate::scalar::C;

use super::{Check, VerificationReport};

type C64 = C<f64>;

/// Loop integrals vanishing by symmetry.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Loop integrals that vanish only at a solution of the period problem.
pub const CLOSING_TOL: f64 = 1e-8;
/// Agreement of loop integrals with the real-line formulas.
pub const FORMULA_TOL: f64 = 1e-8;
pub const RESIDUE_TOL: f64 = 1e-9;

fn loop_options() -> ContourOptions<f64> {
    ContourOptions { tol: 1e-12, ..ContourOptions::default() }
}

/// The ends `(z, w)`: `z = +-a`, `w = +-i`.
pub fn end_points(surface: &RiemannSurface<f64>) -> [(C64, C64); 4] {
    let a = surface.consts.a;
    let i = C64::new(0.0, 1.0);
    [(C64::new(a, 0.0), i), (C64::new(a, 0.0), -i), (C64::new(-a, 0.0), i), (C64::new(-a, 0.0), -i)]
}

/// Counterclockwise integrals of the three forms around the end `(za, wa)`.
///
/// `w` is carried from the end itself up to the circle, so the loop stays on
/// the sheet of that end.
pub fn end_loop_integrals(surface: &RiemannSurface<f64>, za: C64, wa: C64) -> Result<[C64; 3]> {
    let a = surface.consts.a;
    let r = 0.5 * surface.branch.distance(za).min(2.0 * a);
    let w0 = surface.lift_w(za, wa)?;
    let top = za + C64::new(0.0, r);
    let w_top = surface.continue_segment(&Segment::line(za, top), w0)?;
    let path = [Segment::arc(za, r, FRAC_PI_2, FRAC_PI_2 + PI), Segment::arc(za, r, FRAC_PI_2 + PI, FRAC_PI_2 + 2.0 * PI)];
    Ok(integrate_contour(surface, &path, w_top, &loop_options())?.integrals)
}

fn sign_name(x: f64) -> &'static str {
    if x > 0.0 {
        "+"
    } else {
        "-"
    }
}

/// Loop periods at a (nominal) solution: symmetric vanishing, closing, agreement
/// with the real-line formulas and lattice periods around the ends.
pub fn verify_periods(result: &SolveResult<f64>) -> Result<VerificationReport> {
    let surface = RiemannSurface::new(result.params)?;
    let opts = loop_options();
    let mut ints = [[C64::new(0.0, 0.0); 3]; 3];
    for (k, label) in LoopLabel::ALL.into_iter().enumerate() {
        let lp = surface.homology_loop(label)?;
        ints[k] = integrate_loop(&surface, &lp, &opts)?.integrals;
    }
    let [g1, g2, g3] = ints;
    let mut r = VerificationReport::default();
    let vanish = "real period vanishes by the reflection symmetries";
    r.push(Check::at_most("re_gamma1_phi1", vanish, g1[0].re.abs(), SYMMETRY_TOL));
    r.push(Check::at_most("re_gamma2_phi2", vanish, g2[1].re.abs(), SYMMETRY_TOL));
    r.push(Check::at_most("re_gamma3_phi1", vanish, g3[0].re.abs(), SYMMETRY_TOL));
    let exact = "real period of the height differential vanishes";
    for (k, g) in ints.iter().enumerate() {
        r.push(Check::at_most(format!("re_gamma{}_phi3", k + 1), exact, g[2].re.abs(), SYMMETRY_TOL));
    }
    let closing = "real period closes at a solution of the period problem";
    r.push(Check::at_most("re_gamma2_phi1", closing, g2[0].re.abs(), CLOSING_TOL));
    r.push(Check::at_most("re_gamma3_phi2", closing, g3[1].re.abs(), CLOSING_TOL));

    let formula = "loop period equals the real-line integral";
    let res = &result.residuals;
    r.push(Check::close("gamma2_phi1_vs_xi1", formula, -2.0 * res.xi1, g2[0].re, FORMULA_TOL));
    r.push(Check::close("gamma3_phi2_vs_xi2", formula, -2.0 * res.xi2, g3[1].re, FORMULA_TOL));
    r.push(Check::close("gamma1_phi2_vs_v2", "loop period equals the lattice vector v2", -result.lattice.v2y, g1[1].re, FORMULA_TOL));

    let v1 = result.lattice.v1x;
    for (za, wa) in end_points(&surface) {
        let e = end_loop_integrals(&surface, za, wa)?;
        let name = format!("end_{}a_{}i", sign_name(za.re), sign_name(wa.im));
        let n = (e[0].re / v1).round();
        r.push(Check::close(
            format!("{name}_period_x1"),
            "end period is a nonzero multiple of v1",
            n * v1,
            e[0].re,
            SYMMETRY_TOL * v1.max(1.0),
        ));
        r.push(Check::flag(format!("{name}_period_nonzero"), "end period is a nonzero multiple of v1", n != 0.0));
        r.push(Check::at_most(format!("{name}_period_x2"), "end period has no x2 component", e[1].re.abs(), SYMMETRY_TOL));
        r.push(Check::at_most(format!("{name}_period_x3"), "end period has no x3 component", e[2].re.abs(), SYMMETRY_TOL));
    }
    Ok(r)
}

/// Residues of the three forms at the four ends: `phi2` is regular,
/// `phi3 = dh` has residue `+-1/(2a)` and `phi1` a purely imaginary residue
/// of modulus `1/(2a)`.
pub fn verify_residues(params: &FamilyParams<f64>) -> Result<VerificationReport> {
    let surface = RiemannSurface::new(*params)?;
    let a = surface.consts.a;
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    let mut r = VerificationReport::default();
    for (za, wa) in end_points(&surface) {
        let e = end_loop_integrals(&surface, za, wa)?;
        let res: [C64; 3] = e.map(|v| v / two_pi_i);
        let name = format!("end_{}a_{}i", sign_name(za.re), sign_name(wa.im));
        let s = za.re.signum() / (2.0 * a);
        let phi1 = (wa.inv() - wa) * 0.5 * s;
        r.push(Check::close_vec(
            format!("{name}_res_phi1"),
            "phi1 has a simple pole with imaginary residue",
            vec![phi1.re, phi1.im],
            vec![res[0].re, res[0].im],
            RESIDUE_TOL,
        ));
        r.push(Check::close(
            format!("{name}_res_phi1_modulus"),
            "phi1 residue modulus is 1/(2a)",
            1.0 / (2.0 * a),
            res[0].norm(),
            RESIDUE_TOL,
        ));
        r.push(Check::at_most(format!("{name}_res_phi2"), "phi2 is regular at the ends", res[1].norm(), RESIDUE_TOL));
        r.push(Check::close_vec(
            format!("{name}_res_phi3"),
            "height differential has residue +-1/(2a)",
            vec![s, 0.0],
            vec![res[2].re, res[2].im],
            RESIDUE_TOL,
        ));
    }
    Ok(r)
}
