//! Command-line interface of the `dp3` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{csv_number, Num};
use crate::period::{sign_field, solve_period_problem, GridSpec, PeriodOptions, SolveResult, DEFAULT_QUAD_TOL, DEFAULT_TOL};
use crate::surface::grid::MIN_RESOLUTION;
use crate::surface::{assemble_surface, build_piece, export_mesh, BuildOptions, MeshFormat, DEFAULT_RESOLUTION};
use crate::verify::verify_solution;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "DP3_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "dp3", version, about = "Doubly periodic genus-3 minimal surfaces: period problem, meshes and checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Solve the period problem for one lambda and print the result as JSON.
    Solve {
        #[arg(long, value_parser = open_unit)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve over an evenly spaced lambda grid and print CSV.
    Sweep {
        #[arg(long, value_parser = open_unit)]
        lambda_min: f64,
        #[arg(long, value_parser = open_unit)]
        lambda_max: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signs of both period residuals over the (lambda1, lambda2) region, as CSV.
    Signfield {
        #[arg(long, value_parser = open_unit)]
        lambda: f64,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
        n_lambda1: u32,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
        n_ratio: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mesh of the assembled surface (or of the conjugate piece).
    Mesh {
        #[arg(long, value_parser = open_unit)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lattice cells along x1 and x2, as `NxM`.
        #[arg(long, default_value = "1x1", value_parser = parse_copies)]
        copies: (usize, usize),
        #[arg(long, default_value_t = DEFAULT_RESOLUTION, value_parser = resolution)]
        resolution: usize,
        #[arg(long, value_parser = positive)]
        eps_end: Option<f64>,
        #[arg(long, value_parser = positive)]
        r_max: Option<f64>,
        /// Defaults to the extension of `--out`, else OBJ.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Emit the conjugate piece instead of the assembled surface.
        #[arg(long)]
        conjugate: bool,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
    },
    /// Run every numerical check and print the report as JSON; exit 1 on failure.
    Verify {
        #[arg(long, value_parser = open_unit)]
        lambda: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION, value_parser = verify_resolution)]
        resolution: usize,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Obj,
    Ply,
}

impl From<FormatArg> for MeshFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Obj => MeshFormat::Obj,
            FormatArg::Ply => MeshFormat::Ply,
        }
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"))
}

fn open_unit(s: &str) -> std::result::Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is outside the open interval (0, 1)"))
    }
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let x = parse_f64(s)?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} is not a positive number"))
    }
}

fn resolution(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if n >= MIN_RESOLUTION {
        Ok(n)
    } else {
        Err(format!("resolution must be at least {MIN_RESOLUTION}"))
    }
}

fn verify_resolution(s: &str) -> std::result::Result<usize, String> {
    let n = resolution(s)?;
    if n / 2 >= MIN_RESOLUTION {
        Ok(n)
    } else {
        Err(format!("resolution must be at least {}", 2 * MIN_RESOLUTION))
    }
}

/// `"NxM"` with `N, M >= 1`.
pub fn parse_copies(s: &str) -> std::result::Result<(usize, usize), String> {
    let (n, m) = s.split_once(['x', 'X']).ok_or_else(|| format!("{s:?} is not of the form NxM"))?;
    let n: usize = n.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    let m: usize = m.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
    if n == 0 || m == 0 {
        return Err("copies must be positive".into());
    }
    Ok((n, m))
}

/// Parsed arguments, or the clap error (exit code 2 for usage errors, 0
/// for `--help` and `--version`).
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = RunConfig::try_parse_from(argv)?;
    if let Command::Sweep { lambda_min, lambda_max, .. } = cfg.command {
        if lambda_min > lambda_max {
            let mut cmd = <RunConfig as clap::CommandFactory>::command();
            return Err(cmd.error(clap::error::ErrorKind::ValueValidation, "--lambda-min exceeds --lambda-max"));
        }
    }
    Ok(cfg)
}

/// Solve output with fixed keys and 17-digit numbers.
#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub lambda: Num,
    pub lambda1: Num,
    pub lambda2: Num,
    pub alpha: Num,
    pub a: Num,
    pub b: Num,
    pub xi1: Num,
    pub xi2: Num,
    pub v1x: Num,
    pub v2y: Num,
    pub tol: Num,
}

impl From<&SolveResult<f64>> for SolveSummary {
    fn from(r: &SolveResult<f64>) -> Self {
        Self {
            lambda: Num(r.params.lambda),
            lambda1: Num(r.params.lambda1),
            lambda2: Num(r.params.lambda2),
            alpha: Num(r.constants.alpha),
            a: Num(r.constants.a),
            b: Num(r.constants.b),
            xi1: Num(r.residuals.xi1),
            xi2: Num(r.residuals.xi2),
            v1x: Num(r.lattice.v1x),
            v2y: Num(r.lattice.v2y),
            tol: Num(r.tol),
        }
    }
}

pub fn solve_json(r: &SolveResult<f64>) -> String {
    serde_json::to_string_pretty(&SolveSummary::from(r)).expect("summary serializes")
}

/// `steps` evenly spaced values from `lo` to `hi`.
pub fn sweep_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps).map(|k| if k + 1 == steps { hi } else { lo + (hi - lo) * k as f64 / (steps - 1) as f64 }).collect()
}

pub fn sweep_csv(results: &[SolveResult<f64>]) -> String {
    let mut out = String::from("lambda,lambda1,lambda2,a,b,v1x,v2y\n");
    for r in results {
        let row = [r.params.lambda, r.params.lambda1, r.params.lambda2, r.constants.a, r.constants.b, r.lattice.v1x, r.lattice.v2y];
        out.push_str(&row.map(csv_number).join(","));
        out.push('\n');
    }
    out
}

fn emit(out: &Option<PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn format_for(format: Option<FormatArg>, out: &Option<PathBuf>) -> MeshFormat {
    match format {
        Some(f) => f.into(),
        None => match out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ply") => MeshFormat::Ply,
            _ => MeshFormat::Obj,
        },
    }
}

/// Runs a parsed command, writing to the requested file or `stdout`;
/// returns the process exit code.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    match &cfg.command {
        Command::Solve { lambda, tol, out } => {
            let r = solve_period_problem(*lambda, &PeriodOptions::with_tol(*tol))?;
            emit(out, format!("{}\n", solve_json(&r)).as_bytes(), stdout)?;
        }
        Command::Sweep { lambda_min, lambda_max, steps, tol, out } => {
            let opts = PeriodOptions::with_tol(*tol);
            let results = sweep_grid(*lambda_min, *lambda_max, *steps as usize)
                .par_iter()
                .map(|&l| solve_period_problem(l, &opts))
                .collect::<Result<Vec<_>>>()?;
            emit(out, sweep_csv(&results).as_bytes(), stdout)?;
        }
        Command::Signfield { lambda, n_lambda1, n_ratio, out } => {
            let grid = GridSpec { n_lambda1: *n_lambda1 as usize, n_ratio: *n_ratio as usize, ..GridSpec::default() };
            let field = sign_field(*lambda, &grid, DEFAULT_QUAD_TOL)?;
            let mut csv = String::from("lambda1,lambda2,sign_xi1,sign_xi2\n");
            for s in &field.samples {
                csv.push_str(&format!("{},{},{},{}\n", csv_number(s.lambda1), csv_number(s.lambda2), s.sign_xi1, s.sign_xi2));
            }
            emit(out, csv.as_bytes(), stdout)?;
        }
        Command::Mesh { lambda, out, copies, resolution, eps_end, r_max, format, conjugate, tol } => {
            let r = solve_period_problem(*lambda, &PeriodOptions::with_tol(*tol))?;
            let opts = BuildOptions { resolution: *resolution, eps_end: *eps_end, r_max: *r_max, ..BuildOptions::default() };
            let built = build_piece(&r, &opts)?;
            let mesh = if *conjugate {
                built.pieces.conjugate
            } else {
                assemble_surface(&built.pieces.piece, *copies, &r.lattice)?.0
            };
            emit(out, &export_mesh(&mesh, format_for(*format, out))?, stdout)?;
        }
        Command::Verify { lambda, resolution, tol, out } => {
            let r = solve_period_problem(*lambda, &PeriodOptions::with_tol(*tol))?;
            let report = verify_solution(&r, &BuildOptions::with_resolution(*resolution))?;
            emit(out, format!("{}\n", report.to_json()).as_bytes(), stdout)?;
            if !report.pass() {
                for c in report.failures() {
                    eprintln!("check failed: {} ({})", c.name, c.anchor);
                }
                return Ok(EXIT_FAILURE);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Caps the global thread pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV}={v:?} is not a thread count"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

/// Full program: parse, run, report errors; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    let mut stdout = std::io::stdout().lock();
    match execute(&cfg, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NoSignChange(scan) = &e {
                for (l1, f) in scan {
                    eprintln!("  lambda1 = {l1:.6e}: xi1 = {f:.6e}");
                }
            }
            EXIT_FAILURE
        }
    }
}
