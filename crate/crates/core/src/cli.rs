//! The `homop` command line: `apply`, `verify` and `bounds`.
//!
//! Exit status: 0 on success, 1 when a suite or bound fails, 2 on usage
//! errors, 3 on numerical domain errors, 4 on I/O errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error as ThisError;

use crate::bounds::{self, BoundReport, Verdict};
use crate::circle_ops::{self, Backend};
use crate::error::Error;
use crate::funcspace::{
    alpha_grid, holder_seminorm_estimate, Function1D, HolderWitness, Periodic, PeriodicFn, PolarTensorSum, TensorSum2D,
};
use crate::output::{Format, Output, ValueTable};
use crate::plane_ops::{k_apply, PlanePoint, Representation};
use crate::pvquad::{pv_line_hilbert, PVQuadratureConfig, QuadWarning};
use crate::verify::{self, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "HOMOP_THREADS";

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Op(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Op(e) if e.is_usage() => EXIT_USAGE,
            CliError::Op(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "homop", version, about = "Antisymmetric homogeneous operator on the plane: apply, verify, bound")]
pub struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Apply an operator and tabulate its values.
    Apply(ApplyArgs),
    /// Run property suites.
    Verify(VerifyArgs),
    /// Evaluate a norm bound.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadArgs {
    /// Angular grid size for circle quadratures.
    #[arg(long = "n", default_value_t = 2048)]
    pub n: usize,
    /// Truncation radius for line integrals.
    #[arg(long, default_value_t = 1000.0)]
    pub radius: f64,
    /// Truncation radius for power-type inputs.
    #[arg(long, default_value_t = 1e4)]
    pub r_power: f64,
    /// Gauss nodes per panel.
    #[arg(long, default_value_t = 24)]
    pub nodes: usize,
    /// `ignore` or `power-extrapolate[:beta]`.
    #[arg(long, default_value = "power-extrapolate")]
    pub tail: String,
}

impl QuadArgs {
    pub fn config(&self) -> CliResult<PVQuadratureConfig> {
        let cfg = PVQuadratureConfig {
            nodes: self.nodes,
            radius: self.radius,
            power_radius: self.r_power,
            tail: self.tail.parse()?,
            ..PVQuadratureConfig::default()
        };
        cfg.validate()?;
        if self.n < 8 || self.n % 2 != 0 {
            return Err(usage(format!("--n must be even and >= 8, got {}", self.n)));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApplyOp {
    K1,
    K2,
    #[value(name = "calK")]
    #[serde(rename = "calK")]
    CalK,
    KEst1,
    KStepanov,
    KRadon,
    HilbertLine,
    HilbertCircle,
    J,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendArg {
    Auto,
    Spectral,
    Quadrature,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FunctionArgs {
    /// Periodic or line family, e.g. `trigpoly`, `holder-cusp`, `cos:3`, `gaussian:0,1`.
    #[arg(long)]
    pub family: Option<String>,
    /// Trigonometric coefficients `k=<int>:<re>[:<im>],...`.
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Hölder exponent.
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Radial factor of a polar tensor.
    #[arg(long)]
    pub radial: Option<String>,
    /// Angular factor of a polar tensor.
    #[arg(long)]
    pub angular: Option<String>,
    #[arg(long)]
    pub f1: Option<String>,
    #[arg(long)]
    pub f2: Option<String>,
    /// Number of points of the half-offset evaluation grid on the circle.
    #[arg(long, default_value_t = 64)]
    pub alpha_grid: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ApplyArgs {
    pub op: ApplyOp,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Polar radius for `calK`.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Evaluation point `x1,x2` (plane operators, repeatable) or a list of
    /// abscissae (hilbert-line).
    #[arg(long, allow_hyphen_values = true)]
    pub x: Vec<String>,
    /// `grid3` or `x1,x2;x1,x2;...`.
    #[arg(long)]
    pub points: Option<String>,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// A suite name or `all`.
    pub suite: String,
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    #[arg(long, default_value_t = 16)]
    pub kmax: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundName {
    Est3,
    K2,
    J,
    K1Holder,
    RieszTable,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    pub bound: BoundName,
    /// Exponent list.
    #[arg(long)]
    pub p: Option<String>,
    /// Tensor factors `f1,f2`.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long, default_value = "grid3")]
    pub points: String,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Norm of the conjugate function on the Hölder space, for `k1-holder`.
    #[arg(long)]
    pub hilbert_norm: Option<f64>,
    /// Grid size for the Hölder seminorm estimate when no closed form exists.
    #[arg(long, default_value_t = 1024)]
    pub witness_grid: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Splits `a:1,2,b:3` into `["a:1,2", "b:3"]`: a comma starts a new item
/// only when the next token begins with a letter.
pub fn split_specs(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for tok in s.split(',') {
        let t = tok.trim();
        let starts_name = t.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        match out.last_mut() {
            Some(last) if !starts_name => {
                last.push(',');
                last.push_str(t);
            }
            _ => out.push(t.to_string()),
        }
    }
    out
}

fn parse_f64_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|a| a.trim().parse::<f64>().map_err(|_| usage(format!("{what}: `{a}` is not a number"))))
        .collect()
}

fn parse_point(s: &str) -> CliResult<PlanePoint> {
    match parse_f64_list(s, "point")?.as_slice() {
        [a, b] => Ok(PlanePoint::new(*a, *b)),
        _ => Err(usage(format!("point `{s}` must be `x1,x2`"))),
    }
}

/// `grid3` for `{0.5, 1, 2}²`, otherwise `x1,x2;x1,x2;...`.
pub fn parse_points(s: &str) -> CliResult<Vec<PlanePoint>> {
    if s == "grid3" {
        return Ok(verify::grid3());
    }
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_point).collect()
}

fn periodic(f: &FunctionArgs) -> CliResult<PeriodicFn> {
    let family = match (&f.family, &f.coeffs) {
        (Some(fam), _) => fam.as_str(),
        (None, Some(_)) => "trigpoly",
        (None, None) => return Err(usage("--family is required")),
    };
    Ok(match family {
        "trigpoly" => {
            let c = f.coeffs.as_deref().ok_or_else(|| usage("--family trigpoly needs --coeffs"))?;
            format!("trigpoly:{c}").parse()?
        }
        "holder-cusp" => PeriodicFn::holder_cusp(f.gamma, 0.0)?,
        other => other.parse()?,
    })
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> CliResult<&'a str> {
    v.as_deref().ok_or_else(|| usage(format!("{flag} is required")))
}

fn polar_tensor(f: &FunctionArgs) -> CliResult<PolarTensorSum> {
    let radial: Function1D = required(&f.radial, "--radial")?.parse()?;
    let angular: PeriodicFn = required(&f.angular, "--angular")?.parse()?;
    Ok(PolarTensorSum::simple(radial, angular)?)
}

/// `auto` picks the spectral backend when the input has an exact spectrum.
fn backend_for(arg: BackendArg, has_spectrum: bool) -> Backend {
    match arg {
        BackendArg::Spectral => Backend::Spectral,
        BackendArg::Quadrature => Backend::Quadrature,
        BackendArg::Auto if has_spectrum => Backend::Spectral,
        BackendArg::Auto => Backend::Quadrature,
    }
}

/// Analytic seminorm when the family has one, else the grid estimate.
fn witness(phi: &PeriodicFn, gamma: f64, grid: usize) -> CliResult<HolderWitness> {
    Ok(match phi.analytic_holder_seminorm(gamma) {
        Some(s) => HolderWitness::analytic(gamma, s)?,
        None => holder_seminorm_estimate(phi, gamma, grid)?,
    })
}

fn evaluation_grid(m: usize) -> CliResult<Vec<f64>> {
    if m == 0 {
        return Err(usage("--alpha-grid must be positive"));
    }
    Ok(alpha_grid(m))
}

fn report_warnings(ws: &[QuadWarning], at: &str) {
    for w in ws {
        eprintln!("warning: {at}: {}", serde_json::to_value(w).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default());
    }
}

fn circle_table(alphas: &[f64], vals: Vec<Complex64>) -> ValueTable {
    let mut t = ValueTable::new(vec!["alpha"]);
    for (&a, v) in alphas.iter().zip(vals) {
        t.push(vec![a], v);
    }
    t
}

fn plane_points(a: &ApplyArgs) -> CliResult<Vec<PlanePoint>> {
    let mut pts = Vec::new();
    for x in &a.x {
        pts.push(parse_point(x)?);
    }
    if let Some(p) = &a.points {
        pts.extend(parse_points(p)?);
    }
    if pts.is_empty() {
        return Err(usage("give at least one --x x1,x2 or --points"));
    }
    Ok(pts)
}

pub fn cmd_apply(a: &ApplyArgs) -> CliResult<Output> {
    let cfg = a.quad.config()?;
    let n = a.quad.n;
    let f = &a.function;
    let table = match a.op {
        ApplyOp::K1 | ApplyOp::HilbertCircle | ApplyOp::J => {
            let phi = periodic(f)?;
            let alphas = evaluation_grid(f.alpha_grid)?;
            let backend = backend_for(f.backend, phi.spectrum().is_some());
            let vals = match a.op {
                ApplyOp::K1 => circle_ops::k1_apply(&phi, &alphas, backend, n)?,
                ApplyOp::HilbertCircle => circle_ops::hilbert_circle(&phi, &alphas, backend, n)?,
                _ => {
                    let w = witness(&phi, f.gamma, 1024)?;
                    circle_ops::j_apply_with(&phi, Some(&w), &alphas, backend, &cfg)?
                }
            };
            circle_table(&alphas, vals)
        }
        ApplyOp::K2 | ApplyOp::CalK => {
            let phi = polar_tensor(f)?;
            let alphas = evaluation_grid(f.alpha_grid)?;
            let backend = backend_for(f.backend, phi.terms().iter().all(|(_, g)| g.spectrum().is_some()));
            let vals = circle_ops::k2_apply(&phi, &alphas, backend, n, &cfg)?;
            if a.op == ApplyOp::K2 {
                circle_table(&alphas, vals)
            } else {
                if !(a.r > 0.0 && a.r.is_finite()) {
                    return Err(Error::Domain(format!("r = {}: the polar operator lives on r > 0", a.r)).into());
                }
                let mut t = ValueTable::new(vec!["r", "alpha"]);
                for (&al, v) in alphas.iter().zip(vals) {
                    t.push(vec![a.r, al], v / a.r);
                }
                t
            }
        }
        ApplyOp::KEst1 | ApplyOp::KStepanov | ApplyOp::KRadon => {
            let f1: Function1D = required(&f.f1, "--f1")?.parse()?;
            let f2: Function1D = required(&f.f2, "--f2")?.parse()?;
            let rep = match a.op {
                ApplyOp::KEst1 => Representation::Est1,
                ApplyOp::KStepanov => Representation::Stepanov,
                _ => Representation::Radon,
            };
            let tensor = TensorSum2D::simple(f1, f2);
            let pts = plane_points(a)?;
            let mut t = ValueTable::new(vec!["x1", "x2"]);
            for x in pts {
                let r = k_apply(&tensor, x, rep, &cfg)?;
                report_warnings(&r.warnings, &format!("x = ({}, {})", x.x1, x.x2));
                t.push(vec![x.x1, x.x2], Complex64::new(r.value, 0.0));
            }
            t
        }
        ApplyOp::HilbertLine => {
            let g: Function1D = f
                .family
                .as_deref()
                .or(f.f1.as_deref())
                .ok_or_else(|| usage("--family is required"))?
                .parse()?;
            let mut xs = Vec::new();
            for x in &a.x {
                xs.extend(parse_f64_list(x, "--x")?);
            }
            if xs.is_empty() {
                return Err(usage("give at least one --x"));
            }
            let mut t = ValueTable::new(vec!["x"]);
            for x in xs {
                let r = pv_line_hilbert(&g, x, &cfg)?;
                report_warnings(&r.warnings, &format!("x = {x}"));
                t.push(vec![x], Complex64::new(r.value, 0.0));
            }
            t
        }
    };
    Ok(Output::Values(table))
}

pub fn cmd_verify(a: &VerifyArgs) -> CliResult<Output> {
    let quad = a.quad.config()?;
    let suites: Vec<Suite> = match a.suite.as_str() {
        "all" => Suite::ALL.to_vec(),
        s => vec![s.parse().map_err(|_| usage(format!("unknown suite `{s}`")))?],
    };
    if a.quad.n < 2 * a.kmax + 2 {
        return Err(Error::Aliasing { k_max: a.kmax, n: a.quad.n }.into());
    }
    let cfg = VerifyConfig {
        seed: a.out.seed,
        cases: a.cases,
        k_max: a.kmax,
        n: a.quad.n,
        quad,
    };
    let mut out = Vec::new();
    for s in suites {
        out.extend(verify::run(s, &cfg)?);
    }
    Ok(Output::Suites(out))
}

pub fn cmd_bounds(a: &BoundsArgs) -> CliResult<Output> {
    let cfg = a.quad.config()?;
    let f = &a.function;
    let reports: Vec<BoundReport> = match a.bound {
        BoundName::RieszTable => {
            let ps = parse_f64_list(a.p.as_deref().unwrap_or("1.25,1.5,2,3,4"), "--p")?;
            return Ok(Output::Riesz(bounds::riesz_table(&ps)?));
        }
        BoundName::Est3 => {
            let (s1, s2) = match (&a.f, &f.f1, &f.f2) {
                (Some(s), _, _) => match split_specs(s).as_slice() {
                    [x, y] => (x.clone(), y.clone()),
                    _ => return Err(usage(format!("--f `{s}` must name two factors"))),
                },
                (None, Some(x), Some(y)) => (x.clone(), y.clone()),
                _ => return Err(usage("--f f1,f2 is required")),
            };
            let tensor = TensorSum2D::simple(s1.parse()?, s2.parse()?);
            let pts = parse_points(&a.points)?;
            let mut all = Vec::new();
            for p in parse_f64_list(a.p.as_deref().unwrap_or("2"), "--p")? {
                all.extend(bounds::check_est3(&tensor, &pts, p, &cfg)?);
            }
            all
        }
        BoundName::K2 => {
            let phi = polar_tensor(f)?;
            vec![bounds::check_k2_bound(&phi, &evaluation_grid(f.alpha_grid)?, a.quad.n, &cfg)?]
        }
        BoundName::J => {
            let phi = periodic(f)?;
            let w = witness(&phi, f.gamma, a.witness_grid)?;
            vec![bounds::check_j_bound(&phi, &w, &evaluation_grid(f.alpha_grid)?, &cfg)?]
        }
        BoundName::K1Holder => {
            let phi = periodic(f)?;
            let w = witness(&phi, f.gamma, a.witness_grid)?;
            vec![bounds::check_k1_even_holder(&phi, &w, &evaluation_grid(f.alpha_grid)?, a.quad.n, a.hilbert_norm)?]
        }
    };
    Ok(Output::Bounds(reports))
}

/// Everything needed to rerun the command: the parsed arguments with
/// defaults filled in, the quadrature configuration, and the tool version.
pub fn run_config(cli: &Cli) -> Value {
    let quad = match &cli.command {
        Command::Apply(a) => &a.quad,
        Command::Verify(a) => &a.quad,
        Command::Bounds(a) => &a.quad,
    };
    json!({
        "args": serde_json::to_value(cli).unwrap_or(Value::Null),
        "quadrature": quad.config().map(|c| json!(c.to_kv())).unwrap_or(Value::Null),
        "defaults": { "N": 2048, "R": 1000.0, "K_max": 16 },
        "version": crate::output::VERSION,
    })
}

fn failed(out: &Output) -> bool {
    match out {
        Output::Suites(s) => s.iter().any(|r| !r.passed()),
        Output::Bounds(b) => b.iter().any(|r| r.verdict == Verdict::Fail),
        _ => false,
    }
}

pub fn execute(cli: &Cli) -> CliResult<i32> {
    let (out, io) = match &cli.command {
        Command::Apply(a) => (cmd_apply(a)?, &a.out),
        Command::Verify(a) => (cmd_verify(a)?, &a.out),
        Command::Bounds(a) => (cmd_bounds(a)?, &a.out),
    };
    let default = match &cli.command {
        Command::Verify(_) => Format::Json,
        _ => Format::Csv,
    };
    out.write_to(io.out.as_deref(), io.format.unwrap_or(default), &run_config(cli))?;
    Ok(if failed(&out) { EXIT_FAILED } else { EXIT_OK })
}

fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        // a second initialisation in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args`, runs the command, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match init_threads().and_then(|_| execute(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_splitting() {
        assert_eq!(split_specs("gaussian,gaussian"), ["gaussian", "gaussian"]);
        assert_eq!(split_specs("gaussian:0.5,0.7,bump:-1,2"), ["gaussian:0.5,0.7", "bump:-1,2"]);
        assert_eq!(split_specs("indicator:0,1,power:0.5"), ["indicator:0,1", "power:0.5"]);
    }

    #[test]
    fn points() {
        assert_eq!(parse_points("grid3").unwrap().len(), 9);
        let p = parse_points("1,4;-0.5,2").unwrap();
        assert_eq!(p[1], PlanePoint::new(-0.5, 2.0));
        assert!(parse_points("1,2,3").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Op(Error::Domain("x".into())).exit_code(), EXIT_DOMAIN);
        assert_eq!(CliError::Op(Error::MissingWitness).exit_code(), EXIT_USAGE);
        assert_eq!(usage("x").exit_code(), EXIT_USAGE);
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
