//! Numerical audit of the constructed surfaces.
//!
//! Every check records a target, the measured value, a tolerance and the
//! outcome; failures are reported, never raised.

pub mod minimality;
pub mod periods;
pub mod symmetry;

use serde::Serialize;

use crate::error::Result;
use crate::format::Num;
use crate::period::SolveResult;
use crate::surface::{build_piece, BuildOptions};

pub use periods::{verify_periods, verify_residues};
pub use minimality::verify_minimality_and_graph;
pub use symmetry::verify_symmetries;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Scalar(Num),
    Vector(Vec<Num>),
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Scalar(Num(x))
    }
}

impl From<Vec<f64>> for Quantity {
    fn from(v: Vec<f64>) -> Self {
        Quantity::Vector(v.into_iter().map(Num).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The property the check stands for.
    pub anchor: String,
    pub target: Quantity,
    pub measured: Quantity,
    pub tol: Num,
    pub pass: bool,
}

impl Check {
    /// `|measured - target| <= tol`.
    pub fn close(name: impl Into<String>, anchor: &str, target: f64, measured: f64, tol: f64) -> Self {
        let pass = (measured - target).abs() <= tol;
        Self { name: name.into(), anchor: anchor.into(), target: target.into(), measured: measured.into(), tol: Num(tol), pass }
    }

    /// `measured <= tol`, target zero.
    pub fn at_most(name: impl Into<String>, anchor: &str, measured: f64, tol: f64) -> Self {
        let pass = measured <= tol;
        Self { name: name.into(), anchor: anchor.into(), target: 0.0.into(), measured: measured.into(), tol: Num(tol), pass }
    }

    /// Euclidean distance between two vectors at most `tol`.
    pub fn close_vec(name: impl Into<String>, anchor: &str, target: Vec<f64>, measured: Vec<f64>, tol: f64) -> Self {
        let d = target.iter().zip(&measured).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        Self {
            name: name.into(),
            anchor: anchor.into(),
            target: target.into(),
            measured: measured.into(),
            tol: Num(tol),
            pass: d <= tol,
        }
    }

    /// A yes/no property, encoded as target 1.
    pub fn flag(name: impl Into<String>, anchor: &str, ok: bool) -> Self {
        let m = if ok { 1.0 } else { 0.0 };
        Self { name: name.into(), anchor: anchor.into(), target: 1.0.into(), measured: m.into(), tol: Num(0.0), pass: ok }
    }

    /// `measured < bound`.
    pub fn below(name: impl Into<String>, anchor: &str, bound: f64, measured: f64) -> Self {
        let pass = measured < bound;
        Self { name: name.into(), anchor: anchor.into(), target: bound.into(), measured: measured.into(), tol: Num(0.0), pass }
    }

    /// `measured > bound`.
    pub fn above(name: impl Into<String>, anchor: &str, bound: f64, measured: f64) -> Self {
        let pass = measured > bound;
        Self { name: name.into(), anchor: anchor.into(), target: bound.into(), measured: measured.into(), tol: Num(0.0), pass }
    }

    /// `measured` lies in `[lo, hi]`; the target is the midpoint.
    pub fn within(name: impl Into<String>, anchor: &str, lo: f64, hi: f64, measured: f64) -> Self {
        let pass = measured >= lo && measured <= hi;
        let target = 0.5 * (lo + hi);
        Self {
            name: name.into(),
            anchor: anchor.into(),
            target: target.into(),
            measured: measured.into(),
            tol: Num(0.5 * (hi - lo)),
            pass,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// All checks for a solved parameter triple: periods, residues, and the
/// geometry of pieces built at `opts.resolution` and half of it.
pub fn verify_solution(result: &SolveResult<f64>, opts: &BuildOptions) -> Result<VerificationReport> {
    let mut report = verify_periods(result)?;
    report.extend(verify_residues(&result.params)?);
    let fine = build_piece(result, opts)?;
    let coarse = build_piece(result, &BuildOptions { resolution: opts.resolution / 2, ..*opts })?;
    report.extend(verify_symmetries(&fine, &result.lattice)?);
    report.extend(verify_minimality_and_graph(&fine, &coarse)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_shape() {
        let mut r = VerificationReport::default();
        r.push(Check::close("x", "a property", 1.0, 1.0 + 1e-12, 1e-9));
        r.push(Check::flag("y", "another", false));
        assert!(!r.pass());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let first = &v.as_array().unwrap()[0];
        for key in ["name", "anchor", "target", "measured", "tol", "pass"] {
            assert!(first.get(key).is_some(), "{key}");
        }
        assert_eq!(r.failures().count(), 1);
    }
}
