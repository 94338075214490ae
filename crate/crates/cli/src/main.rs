//! `sphrect`: constants, solves, sweeps, moduli, Belyi checks and boundary
//! reports for spherical rectangles with angles (3/2, 1/2, 3/2, 1/2).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod json;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;
use sphrect::accessory::{solve, AccessorySolution, SolverOptions};
use sphrect::belyi::{
    corners, example1_identity, example2, example2_conditions, example_consistency, example_map, k_from_corners,
    verify_belyi, Example2Conditions, ExampleConsistency, RamificationPortrait, TVariant,
};
use sphrect::constants::{k_crit, CriticalConstants};
use sphrect::developing::boundary_check;
use sphrect::modulus::ModulusPair;
use sphrect::quadrature::DEFAULT_TOL;
use sphrect::{Error, Family, QuadParam};

const DIGITS: usize = 17;
const CONSTANT_DIGITS: usize = 12;
/// Half-width of the excluded window around `k_crit`.
const SOLVE_GAP: f64 = 1e-9;
const SWEEP_GAP: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "sphrect", version, about = "Spherical rectangles with angles (3/2, 1/2, 3/2, 1/2)")]
struct Cli {
    /// Absolute tolerance of every quadrature.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol_quad: f64,
    /// Width at which root bisection stops.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_root: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the critical constants.
    Constants,
    /// Solve for the accessory parameter at one corner parameter k.
    Solve {
        #[arg(long)]
        k: f64,
    },
    /// Solve on a uniform grid of k and write a CSV file.
    Sweep {
        #[arg(long)]
        k_min: f64,
        #[arg(long)]
        k_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert between k and the conformal modulus.
    #[command(group(ArgGroup::new("input").required(true).args(["k", "modulus"])))]
    Modulus {
        #[arg(long)]
        k: Option<f64>,
        /// Conformal modulus (height over width).
        #[arg(long = "K", id = "modulus", value_name = "K")]
        modulus: Option<f64>,
    },
    /// Verify one of the algebraic example maps.
    Belyi {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        example: u32,
        /// Exit with status 4 if any check fails.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Check where the boundary lands under the developing map.
    Boundary {
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Strict(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Strict(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) | Failure::Strict(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Accuracy { .. } | Error::Bracket(_) | Error::Divergence(_) => Failure::Numerical(e.to_string()),
            Error::BelyiViolation { .. } => Failure::Strict(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn emit<T: Serialize>(value: &T, digits: usize) -> Result<(), Failure> {
    let text = json::to_string(value, digits).map_err(|e| Failure::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn check_k(k: f64) -> Result<(), Failure> {
    if !(k > 1.0) || !k.is_finite() {
        return Err(Failure::Usage(format!("k = {k} is not a valid corner parameter: need k > 1")));
    }
    let kc = k_crit();
    if (k - kc).abs() <= SOLVE_GAP {
        return Err(Failure::Usage(format!(
            "k = {k} is within {SOLVE_GAP:e} of k_crit = {kc:.12}, where both families degenerate (c = 1); \
             the moduli strictly between K_crit and 1/K_crit are not realized"
        )));
    }
    Ok(())
}

fn solver_options(cli: &Cli) -> SolverOptions {
    SolverOptions { quad_tol: cli.tol_quad, root_tol: cli.tol_root, ..SolverOptions::default() }
}

fn cmd_solve(k: f64, opts: &SolverOptions) -> Result<AccessorySolution, Failure> {
    check_k(k)?;
    Ok(solve(k, opts)?)
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    out: String,
    rows: usize,
    skipped: Vec<f64>,
}

fn cmd_sweep(k_min: f64, k_max: f64, steps: usize, out: &Path, opts: &SolverOptions) -> Result<SweepSummary, Failure> {
    if !(k_min > 1.0 && k_max > k_min && k_max.is_finite()) {
        return Err(Failure::Usage(format!("need 1 < k_min < k_max, got k_min = {k_min}, k_max = {k_max}")));
    }
    if steps < 2 {
        return Err(Failure::Usage(format!("need at least 2 steps, got {steps}")));
    }
    let kc = k_crit();
    let mut rows = Vec::with_capacity(steps);
    let mut skipped = Vec::new();
    for i in 0..steps {
        let k = k_min + (k_max - k_min) * i as f64 / (steps - 1) as f64;
        if (k - kc).abs() <= SWEEP_GAP {
            eprintln!("skipping k = {k}: within {SWEEP_GAP:e} of k_crit = {kc:.12}");
            skipped.push(k);
            continue;
        }
        rows.push(solve(k, opts)?);
    }
    let mut w = csv::Writer::from_path(out).map_err(|e| io_failure(out, e))?;
    w.write_record(["k", "c", "alpha", "modulus", "residual", "family"]).map_err(|e| io_failure(out, e))?;
    for s in &rows {
        let f = |v: f64| json::fmt_sig(v, DIGITS);
        w.write_record([f(s.k()), f(s.c), f(s.alpha), f(s.modulus), f(s.residual), s.family().to_string()])
            .map_err(|e| io_failure(out, e))?;
    }
    w.flush().map_err(|e| io_failure(out, e))?;
    Ok(SweepSummary { out: out.display().to_string(), rows: rows.len(), skipped })
}

#[derive(Debug, Serialize)]
struct ModulusReport {
    k: f64,
    /// Modulus with the side `(−1, 1)` as a horizontal side.
    modulus: f64,
    /// Modulus with the other corner marked.
    reciprocal_modulus: f64,
    family: Option<Family>,
}

fn cmd_modulus(k: Option<f64>, modulus: Option<f64>) -> Result<ModulusReport, Failure> {
    let pair = match (k, modulus) {
        (Some(k), None) => ModulusPair::from_k(k)?,
        (None, Some(m)) => ModulusPair::from_modulus(m)?,
        _ => return Err(Failure::Usage("give exactly one of --k and --K".into())),
    };
    let family =
        if (pair.k - k_crit()).abs() <= SOLVE_GAP { None } else { Some(QuadParam::classify(pair.k)?.family()) };
    Ok(ModulusReport { k: pair.k, modulus: pair.modulus, reciprocal_modulus: pair.reciprocal, family })
}

#[derive(Debug, Serialize)]
struct Provenance {
    symbol: String,
    expression: String,
    value: String,
}

#[derive(Debug, Serialize)]
struct Corner {
    /// `None` for the point at infinity.
    x: Option<f64>,
    angle: f64,
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    value: f64,
    tolerance: f64,
}

#[derive(Debug, Serialize)]
struct IntegerIdentity {
    lhs: Vec<i64>,
    rhs: Vec<i64>,
}

#[derive(Debug, Serialize)]
struct PrintedVariant {
    conditions: Example2Conditions,
    verify_error: Option<String>,
}

#[derive(Debug, Serialize)]
struct BelyiReport {
    example: u32,
    name: String,
    degree: usize,
    dihedral_order: u32,
    numerator: Vec<f64>,
    denominator: Vec<f64>,
    provenance: Vec<Provenance>,
    portrait: Option<RamificationPortrait>,
    verify_error: Option<String>,
    corners: Vec<Corner>,
    k_from_corners: Option<f64>,
    integer_identity: Option<IntegerIdentity>,
    conditions: Option<Example2Conditions>,
    printed_variant: Option<PrintedVariant>,
    consistency: Option<ExampleConsistency>,
    checks: Vec<Check>,
    all_passed: bool,
}

const ALPHA_TOL: f64 = 1e-3;
const K_REL_TOL: f64 = 1e-4;
const PRINTED_FAIL_MARGIN: f64 = 1e-3;

fn cmd_belyi(n: u32, tol: f64) -> Result<BelyiReport, Failure> {
    let map = example_map(n)?;
    let (numerator, denominator) = map.coefficients_f64();
    let provenance = map
        .provenance()
        .iter()
        .map(|(s, e, v)| Provenance { symbol: s.clone(), expression: e.clone(), value: v.clone() })
        .collect();
    let mut checks = Vec::new();
    let verified = verify_belyi(&map, tol);
    let (portrait, verify_error) = match verified {
        Ok(p) => (Some(p), None),
        Err(e) => (None, Some(e.to_string())),
    };
    checks.push(Check {
        name: "critical_values",
        passed: portrait.is_some(),
        value: portrait.as_ref().map_or(f64::NAN, |p| p.max_critical_value_defect),
        tolerance: tol,
    });
    let mut corner_list = Vec::new();
    let mut k_corners = None;
    if let Some(p) = &portrait {
        checks.push(Check {
            name: "riemann_hurwitz",
            passed: p.invariants_hold(),
            value: p.ramification_total() as f64,
            tolerance: 0.0,
        });
        let cs = corners(p, map.dihedral_order());
        corner_list = cs.iter().map(|&(x, angle)| Corner { x: x.is_finite().then_some(x), angle }).collect();
        k_corners = k_from_corners(&cs).ok();
    }
    let integer_identity = (n == 1).then(|| {
        let (lhs, rhs) = example1_identity();
        checks.push(Check { name: "integer_identity", passed: lhs == rhs, value: 0.0, tolerance: 0.0 });
        IntegerIdentity { lhs, rhs }
    });
    let (conditions, printed_variant) = if n == 2 {
        let good = example2_conditions(TVariant::Corrected);
        let bad = example2_conditions(TVariant::Printed);
        let verify_error = verify_belyi(&example2(TVariant::Printed), tol).err().map(|e| e.to_string());
        checks.push(Check {
            name: "corrected_t_conditions",
            passed: good.max_residual <= tol,
            value: good.max_residual,
            tolerance: tol,
        });
        checks.push(Check {
            name: "printed_t_rejected",
            passed: bad.max_residual > PRINTED_FAIL_MARGIN && verify_error.is_some(),
            value: bad.max_residual,
            tolerance: PRINTED_FAIL_MARGIN,
        });
        (Some(good), Some(PrintedVariant { conditions: bad, verify_error }))
    } else {
        (None, None)
    };
    let consistency = match example_consistency(n) {
        Ok(c) => Some(c),
        Err(e) if e.is_numerical() => return Err(e.into()),
        Err(_) => None,
    };
    checks.push(Check {
        name: "alpha_orbit",
        passed: consistency.is_some_and(|c| c.alpha_error <= ALPHA_TOL),
        value: consistency.map_or(f64::NAN, |c| c.alpha_error),
        tolerance: ALPHA_TOL,
    });
    let k_gap = consistency.map_or(f64::NAN, |c| (c.k_from_modulus - c.k_from_corners).abs() / c.k_from_corners);
    checks.push(Check { name: "k_from_corners", passed: k_gap <= K_REL_TOL, value: k_gap, tolerance: K_REL_TOL });
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(BelyiReport {
        example: n,
        name: map.name().to_string(),
        degree: map.degree(),
        dihedral_order: map.dihedral_order(),
        numerator,
        denominator,
        provenance,
        portrait,
        verify_error,
        corners: corner_list,
        k_from_corners: k_corners,
        integer_identity,
        conditions,
        printed_variant,
        consistency,
        checks,
        all_passed,
    })
}

fn cmd_boundary(k: f64, samples: usize, svg_path: Option<&Path>, opts: &SolverOptions) -> Result<(), Failure> {
    check_k(k)?;
    if samples == 0 {
        return Err(Failure::Usage("need at least one sample per side".into()));
    }
    if k > k_crit() {
        return Err(Failure::Usage(format!(
            "k = {k} lies in the second family; boundary images are only reported for 1 < k < k_crit"
        )));
    }
    let sol = solve(k, opts)?;
    let report = boundary_check(&sol, samples, opts.quad_tol)?;
    if let Some(path) = svg_path {
        fs::write(path, svg::render(&report)).map_err(|e| io_failure(path, e))?;
    }
    emit(&report, DIGITS)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let opts = solver_options(cli);
    if !(cli.tol_quad > 0.0 && cli.tol_root > 0.0) {
        return Err(Failure::Usage("tolerances must be positive".into()));
    }
    match &cli.command {
        Command::Constants => emit(CriticalConstants::get(), CONSTANT_DIGITS),
        Command::Solve { k } => emit(&cmd_solve(*k, &opts)?, DIGITS),
        Command::Sweep { k_min, k_max, steps, out } => emit(&cmd_sweep(*k_min, *k_max, *steps, out, &opts)?, DIGITS),
        Command::Modulus { k, modulus } => emit(&cmd_modulus(*k, *modulus)?, DIGITS),
        Command::Belyi { example, strict, tol } => {
            let report = cmd_belyi(*example, *tol)?;
            emit(&report, DIGITS)?;
            if *strict && !report.all_passed {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
                return Err(Failure::Strict(format!("failed checks: {}", failed.join(", "))));
            }
            Ok(())
        }
        Command::Boundary { k, samples, svg } => cmd_boundary(*k, *samples, svg.as_deref(), &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
