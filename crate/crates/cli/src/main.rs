//! Command-line front end: point evaluation, error scans, Stokes tracing,
//! coefficient dumps and LG error bounds.

mod literal;
mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use besselpoly::bigcomplex::{digits_to_bits, DEFAULT_DIGITS};
use besselpoly::lg_coeffs::{compute_e, dump};
use besselpoly::lg_solutions::{eta_bound, lg_eval, region_check, LgSolution};
use besselpoly::mapping::StokesBranch;
use besselpoly::uniform_airy::{
    flag_cusps_log, omega_sample, tau0, theta_airy, theta_airy_regular, theta_reference_with, z_on_ah, OmegaPoint,
};
use besselpoly::{oracle, BigComplex, Error, Problem, ProblemParams, ScaledComplex};

use literal::{parse_complex, parse_grid, Grid};
use output::{Cell, Format, Table};

type C = Complex64;

/// Environment variable holding the default oracle precision in decimal digits.
const PRECISION_ENV: &str = "BESSELPOLY_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "besselpoly", version, about = "Uniform asymptotics of reverse generalised Bessel polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate theta_n(uz; a) at one point.
    Eval(EvalArgs),
    /// Relative error Omega of an expansion along a line of points.
    ScanError(ScanErrorArgs),
    /// Relative error of the Airy expansion along the Stokes curve AH.
    ScanStokes(ScanStokesArgs),
    /// Trace a Stokes line from the turning point.
    TraceStokes(TraceStokesArgs),
    /// Exact LG coefficient tables.
    Coeffs {
        #[command(subcommand)]
        action: CoeffsAction,
    },
    /// LG approximation of a solution together with its error bound.
    Bounds(BoundsArgs),
}

#[derive(Subcommand, Debug)]
enum CoeffsAction {
    /// Print `E s k : P0 , P1 , m` lines for E_s and F_s.
    Dump {
        /// Highest order.
        #[arg(long = "S", default_value_t = 8)]
        order: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Polynomial degree.
    #[arg(long)]
    n: u32,
    /// Polynomial parameter.
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Margin in the admissibility condition alpha >= -1 + delta.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Oracle precision in decimal digits (default from BESSELPOLY_PRECISION, else 50).
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (standard output when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Method {
    Direct,
    Lg,
    Airy,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Point in `re+imi` form.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: C,
    #[arg(long, value_enum, default_value_t = Method::Airy)]
    method: Method,
    /// Airy expansion order.
    #[arg(long = "S", default_value_t = 6)]
    s: usize,
    /// LG truncation order.
    #[arg(long = "N", default_value_t = 5)]
    order: usize,
    /// Also report Omega against the direct sum.
    #[arg(long)]
    compare: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ScanErrorArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// `start:stop:count`, endpoints real or in `re+imi` form.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    grid: Grid,
    #[arg(long, value_enum, default_value_t = Method::Airy)]
    method: Method,
    #[arg(long = "S", default_value_t = 6)]
    s: usize,
    #[arg(long = "N", default_value_t = 5)]
    order: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct ScanStokesArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// `start:stop:count` in tau = arg z (default tau0:pi:401).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    tau: Option<Grid>,
    #[arg(long = "S", default_value_t = 6)]
    s: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Branch {
    Ad,
    Ah,
    Af,
}

#[derive(Args, Debug)]
struct TraceStokesArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum)]
    branch: Branch,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    z: C,
    /// Solution index: 0, 1, -1+ or -1-.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    solution: LgSolution,
    #[arg(long = "N", default_value_t = 5)]
    order: usize,
    /// Also report the relative error against the direct evaluation.
    #[arg(long)]
    compare: bool,
    #[command(flatten)]
    out: OutputArgs,
}

/// Failure categories mapped to exit codes.
enum Failure {
    Range(Error),
    Numerical(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Range { .. } => Failure::Range(e),
            e => Failure::Numerical(e),
        }
    }
}

struct Context {
    problem: Problem,
    precision_bits: u32,
}

fn setup(p: &ParamArgs, env_digits: Option<u32>) -> Result<Context, Failure> {
    let params = ProblemParams::with_delta(p.n, p.a, p.delta)?;
    let digits = p.precision.or(env_digits).unwrap_or(DEFAULT_DIGITS);
    Ok(Context {
        problem: Problem::new(&params)?,
        precision_bits: digits_to_bits(digits),
    })
}

/// The first error in input order, so that failures are reproducible too.
fn collect_ordered<T>(items: Vec<Result<T, Error>>) -> Result<Vec<T>, Error> {
    items.into_iter().collect()
}

/// `theta_n(uz)` from the LG approximation of `w^(0)`:
/// `theta = 2^(n+a-1) (uz)^(n+a/2-1) e^(uz) w^(0)`.
fn theta_lg(problem: &Problem, z: C, order: usize) -> Result<ScaledComplex, Error> {
    let p = &problem.params;
    let w = lg_eval(problem, LgSolution::W0, order, z)?;
    let uz = z * p.u;
    let n = f64::from(p.n);
    let log = (n + p.a - 1.0) * std::f64::consts::LN_2 + (n + 0.5 * p.a - 1.0) * uz.ln() + uz;
    Ok(w.value.mul(ScaledComplex::from_log(log)))
}

fn approx_theta(ctx: &Context, method: Method, z: C, s: usize, order: usize) -> Result<ScaledComplex, Error> {
    match method {
        Method::Airy => theta_airy(&ctx.problem, z, s),
        Method::Lg => theta_lg(&ctx.problem, z, order),
        Method::Direct => Ok(theta_reference_with(&ctx.problem, z, ctx.precision_bits).to_scaled()),
    }
}

fn omega_rows(points: &[OmegaPoint], with_param: bool, with_cusp: bool) -> Vec<Vec<Cell>> {
    points
        .iter()
        .map(|q| {
            let mut row = Vec::new();
            if with_param {
                row.push(Cell::F(q.t));
            }
            row.extend([
                Cell::F(q.z.re),
                Cell::F(q.z.im),
                Cell::F(q.theta.re),
                Cell::F(q.theta.im),
                Cell::F(q.approx.re),
                Cell::F(q.approx.im),
                Cell::F(q.omega),
            ]);
            if with_cusp {
                row.push(Cell::B(q.cusp));
            }
            row
        })
        .collect()
}

fn samples(ctx: &Context, pts: &[(f64, C)], approx: impl Fn(C) -> Result<ScaledComplex, Error> + Sync) -> Result<Vec<OmegaPoint>, Error> {
    let raw = pts
        .par_iter()
        .map(|&(t, z)| approx(z).map(|a| omega_sample(&ctx.problem, t, z, a, ctx.precision_bits)))
        .collect::<Vec<_>>();
    let raw = collect_ordered(raw)?;
    let mags: Vec<f64> = raw.iter().map(|(_, m)| *m).collect();
    Ok(raw
        .into_iter()
        .zip(flag_cusps_log(&mags))
        .map(|((mut p, _), c)| {
            p.cusp = c;
            p
        })
        .collect())
}

fn eval(a: &EvalArgs, env: Option<u32>) -> Result<(Table, OutputArgs), Failure> {
    let ctx = setup(&a.params, env)?;
    if a.method == Method::Lg && !region_check(&ctx.problem, LgSolution::W0, a.z) {
        eprintln!("warning: z = {} lies outside the validity region of the LG solution w0", a.z);
    }
    let approx = approx_theta(&ctx, a.method, a.z, a.s, a.order)?;
    let mut header = vec!["z_re", "z_im", "theta_re", "theta_im"];
    let v = approx.to_c64();
    let mut row = vec![Cell::F(a.z.re), Cell::F(a.z.im), Cell::F(v.re), Cell::F(v.im)];
    if a.compare {
        let (q, _) = omega_sample(&ctx.problem, a.z.re, a.z, approx, ctx.precision_bits);
        header.push("omega");
        row.push(Cell::F(q.omega));
    }
    Ok((Table::new(&header, vec![row]), a.out.clone()))
}

fn scan_error(a: &ScanErrorArgs, env: Option<u32>) -> Result<(Table, OutputArgs), Failure> {
    let ctx = setup(&a.params, env)?;
    let pts: Vec<(f64, C)> = a.grid.points().into_iter().map(|z| (z.re, z)).collect();
    let scan = samples(&ctx, &pts, |z| approx_theta(&ctx, a.method, z, a.s, a.order))?;
    let header = ["z_re", "z_im", "theta_re", "theta_im", "approx_re", "approx_im", "omega"];
    Ok((Table::new(&header, omega_rows(&scan, false, false)), a.out.clone()))
}

fn scan_stokes(a: &ScanStokesArgs, env: Option<u32>) -> Result<(Table, OutputArgs), Failure> {
    let ctx = setup(&a.params, env)?;
    let taus: Vec<f64> = match &a.tau {
        Some(g) => g.points().iter().map(|t| t.re).collect(),
        None => Grid::real(tau0(&ctx.problem), PI, 401).points().iter().map(|t| t.re).collect(),
    };
    let pts = collect_ordered(
        taus.par_iter()
            .map(|&t| z_on_ah(&ctx.problem, t).map(|z| (t, z)))
            .collect(),
    )?;
    let scan = samples(&ctx, &pts, |z| theta_airy_regular(&ctx.problem, z, a.s))?;
    let header = ["tau", "z_re", "z_im", "theta_re", "theta_im", "approx_re", "approx_im", "omega", "cusp"];
    Ok((Table::new(&header, omega_rows(&scan, true, true)), a.out.clone()))
}

fn trace_stokes(a: &TraceStokesArgs, env: Option<u32>) -> Result<(Table, OutputArgs), Failure> {
    let ctx = setup(&a.params, env)?;
    let branch = match a.branch {
        Branch::Ad => StokesBranch::AD,
        Branch::Ah => StokesBranch::AH,
        Branch::Af => StokesBranch::AF,
    };
    let line = ctx.problem.stokes(branch)?;
    let rows = line
        .points
        .iter()
        .zip(&line.xi_values)
        .map(|(z, xi)| vec![Cell::F(z.re), Cell::F(z.im), Cell::F(xi.re), Cell::F(xi.im)])
        .collect();
    Ok((Table::new(&["z_re", "z_im", "xi_re", "xi_im"], rows), a.out.clone()))
}

fn coeffs(action: &CoeffsAction) -> Result<(Table, OutputArgs), Failure> {
    let CoeffsAction::Dump { order, out } = action;
    let tables = compute_e(*order)?;
    let text = dump(&tables);
    let rows = text
        .lines()
        .map(|line| {
            let (head, body) = line.split_once(" : ").expect("dump line");
            let mut it = head.split(' ');
            let table = it.next().unwrap_or_default().to_string();
            let s: i64 = it.next().and_then(|v| v.parse().ok()).unwrap_or_default();
            let k: i64 = it.next().and_then(|v| v.parse().ok()).unwrap_or_default();
            vec![Cell::S(table), Cell::I(s), Cell::I(k), Cell::S(body.to_string())]
        })
        .collect();
    let mut t = Table::new(&["table", "s", "k", "coefficient"], rows);
    t.raw_text = Some(text);
    Ok((t, out.clone()))
}

fn bounds(a: &BoundsArgs, env: Option<u32>) -> Result<(Table, OutputArgs), Failure> {
    let ctx = setup(&a.params, env)?;
    let p = &ctx.problem;
    if !region_check(p, a.solution, a.z) {
        eprintln!("warning: z = {} lies outside the validity region of the LG solution {}", a.z, a.solution);
    }
    let w = lg_eval(p, a.solution, a.order, a.z)?;
    let report = eta_bound(p, a.solution, a.order, a.z)?;
    let v = w.value.to_c64();
    let mut header = vec!["z_re", "z_im", "solution", "N", "w_re", "w_im", "eta", "phi", "psi", "in_region"];
    let mut row = vec![
        Cell::F(a.z.re),
        Cell::F(a.z.im),
        Cell::S(a.solution.to_string()),
        Cell::I(a.order as i64),
        Cell::F(v.re),
        Cell::F(v.im),
        Cell::F(report.eta),
        Cell::F(report.phi),
        Cell::F(report.psi),
        Cell::B(w.in_region),
    ];
    if a.compare {
        let uz = BigComplex::from_c64(a.z * p.params.u, ctx.precision_bits);
        let exact = match a.solution {
            LgSolution::W0 => oracle::w0_direct(&p.params, &uz)?,
            LgSolution::W1 => oracle::w1_direct(&p.params, &uz)?,
            _ => oracle::w_minus1_default(&p.params, &uz)?,
        };
        header.push("rel_error");
        row.push(Cell::F(rel_error(&exact, w.value)));
    }
    Ok((Table::new(&header, vec![row]), a.out.clone()))
}

fn rel_error(exact: &BigComplex, approx: ScaledComplex) -> f64 {
    let a = besselpoly::bigcomplex::scaled_to_rug(&approx, exact.precision_bits());
    BigComplex::from_rug(a).rel_diff(exact)
}

fn run(cli: &Cli, env: Option<u32>) -> Result<(), Failure> {
    let (table, out) = match &cli.command {
        Command::Eval(a) => eval(a, env)?,
        Command::ScanError(a) => scan_error(a, env)?,
        Command::ScanStokes(a) => scan_stokes(a, env)?,
        Command::TraceStokes(a) => trace_stokes(a, env)?,
        Command::Coeffs { action } => coeffs(action)?,
        Command::Bounds(a) => bounds(a, env)?,
    };
    table.write(out.format, out.output.as_deref()).map_err(Failure::Io)
}

fn main() -> ExitCode {
    let env_digits = match std::env::var(PRECISION_ENV) {
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(d) if d > 0 => Some(d),
            _ => {
                eprintln!("error: {PRECISION_ENV} must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        },
        Err(_) => None,
    };
    let cli = Cli::parse();
    match run(&cli, env_digits) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Range(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
