//! Command-line front end: kernel tables, solves, verification suites and
//! parameter scans, all as CSV or report lines.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{check_two_sided_bound, g3_positivity_threshold};
use crate::error::{Error, Result};
use crate::fraccalc::{Order, ScalarFn};
use crate::greens::{BcCoeffs, KernelSpec};
use crate::grid::{uniform_mesh, GridFunction};
use crate::problem::Bvp;
use crate::solver::{
    picard_image, solve_nonlinear_picard, LinearSolution, RhsFn, ThreePointParams,
    ThreePointSolution, DEFAULT_MESH,
};
use crate::verify::{residual_points, run_suite, verify_bcs, verify_residual, Fault, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const PICARD_MAX_ITER: usize = 200;

#[derive(Debug, Parser)]
#[command(
    name = "cgreens",
    version,
    about = "Green's functions for conformable boundary value problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate G(t,s) on an n x n grid as `t,s,G`.
    Eval(RunConfig),
    /// Solve on an n-point mesh and write `t,x`.
    Solve(SolveArgs),
    /// Run the verification suite; exit 1 if any property fails.
    Verify(RunConfig),
    /// Two-sided bound violation as a function of tau, as `tau,violation`.
    Scan(RunConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Sl2,
    Conjugate2,
    Rightfocal2,
    Rightfocal3,
    Cantilever4,
    Lidstone4,
    Threepoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    SignFlip,
    PerturbSolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NonlinearArg {
    One,
    X,
    Onepluxsq,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub bc_gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub bc_delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub bc_eta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub bc_zeta: f64,
    /// Points per axis; defaults to 101 for grids and 257 for solves.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<String>,
    /// Forcing: `one` or `poly:c0,c1,...`.
    #[arg(long, default_value = "one")]
    pub h: String,
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
    #[arg(long, default_value_t = 0.0)]
    pub delta3p: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eta3p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub run: RunConfig,
    /// Solve `D x = lambda f(t, x)` by Picard iteration.
    #[arg(long)]
    pub nonlinear: bool,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "x")]
    pub f: NonlinearArg,
}

fn order(name: &str, v: f64) -> Result<Order> {
    Order::new(v).map_err(|_| Error::Configuration(format!("--{name} = {v} must lie in (0, 1]")))
}

impl RunConfig {
    fn mesh_size(&self, default: usize) -> Result<usize> {
        let n = self.n.unwrap_or(default);
        if n < 3 {
            return Err(Error::Configuration(format!(
                "--n = {n} must be at least 3"
            )));
        }
        Ok(n)
    }

    fn tolerance(&self) -> Result<f64> {
        if !(self.tol > 0.0) {
            return Err(Error::Configuration(format!(
                "--tol = {} must be positive",
                self.tol
            )));
        }
        Ok(self.tol)
    }

    fn alpha(&self) -> Result<Order> {
        order("alpha", self.alpha)
    }

    fn beta(&self) -> Result<Order> {
        order("beta", self.beta)
    }

    fn kernel(&self) -> Result<KernelSpec> {
        let (a, b) = (self.alpha()?, self.beta()?);
        Ok(match self.family {
            FamilyArg::Sl2 => {
                let bc = BcCoeffs::new(self.bc_gamma, self.bc_delta, self.bc_eta, self.bc_zeta)?;
                KernelSpec::sl2(a, b, bc)?
            }
            FamilyArg::Conjugate2 => KernelSpec::conjugate(a, b),
            FamilyArg::Rightfocal2 => KernelSpec::right_focal2(a, b),
            FamilyArg::Rightfocal3 => {
                let tau = self
                    .tau
                    .ok_or_else(|| Error::Configuration("rightfocal3 needs --tau".into()))?;
                KernelSpec::right_focal3(a, b, order("gamma", self.gamma)?, tau)?
            }
            FamilyArg::Cantilever4 => KernelSpec::cantilever(
                a,
                b,
                order("gamma", self.gamma)?,
                order("delta", self.delta)?,
            ),
            FamilyArg::Lidstone4 => KernelSpec::lidstone(a, b),
            FamilyArg::Threepoint => {
                return Err(Error::Configuration(
                    "threepoint has no kernel; use solve".into(),
                ))
            }
        })
    }

    fn three_point(&self) -> Result<ThreePointParams> {
        ThreePointParams::new(self.delta3p, self.eta3p, self.alpha()?)
    }

    fn forcing(&self) -> Result<ScalarFn> {
        parse_forcing(&self.h)
    }
}

/// `one` or `poly:c0,c1,...` (coefficients in increasing degree).
pub fn parse_forcing(spec: &str) -> Result<ScalarFn> {
    if spec == "one" {
        return Ok(ScalarFn::constant(1.0));
    }
    let coeffs = spec
        .strip_prefix("poly:")
        .ok_or_else(|| Error::Configuration(format!("unknown forcing {spec:?}")))?;
    let coeffs = coeffs
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Configuration(format!("bad polynomial {spec:?}: {e}")))?;
    Ok(ScalarFn::polynomial(coeffs))
}

fn nonlinearity(f: NonlinearArg, lambda: f64) -> Result<RhsFn> {
    match f {
        NonlinearArg::One => RhsFn::new(|_, _| 1.0, lambda),
        NonlinearArg::X => RhsFn::new(|_, x| x, lambda),
        NonlinearArg::Onepluxsq => RhsFn::new(|_, x| 1.0 + x * x, lambda),
    }
}

/// What a command produced: text for the output sink plus an exit code.
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn csv_line(buf: &mut String, fields: &[f64]) {
    let line = fields
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    buf.push_str(&line);
    buf.push('\n');
}

pub fn cmd_eval(cfg: &RunConfig, warn: &mut dyn Write) -> Result<Output> {
    let spec = cfg.kernel()?;
    if let KernelSpec::RightFocal3 {
        alpha, beta, tau, ..
    } = spec
    {
        let thr = g3_positivity_threshold(alpha.get(), beta.get());
        if tau <= thr {
            let _ = writeln!(
                warn,
                "warning: tau = {tau} is not above the positivity threshold {thr}"
            );
        }
    }
    let mesh = uniform_mesh(cfg.mesh_size(101)?);
    let mut text = String::from("t,s,G\n");
    for &t in &mesh {
        for &s in &mesh {
            csv_line(&mut text, &[t, s, spec.eval(t, s)]);
        }
    }
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

fn report_trailer(
    text: &mut String,
    x: impl Fn(f64) -> f64,
    h: impl Fn(f64) -> f64,
    bvp: &Bvp,
    tol: f64,
) -> Result<()> {
    let r = verify_residual(&x, h, bvp, &residual_points(), tol)?;
    let b = verify_bcs(&x, bvp, tol)?;
    let _ = writeln!(
        text,
        "# residual={:e} bcs={:e}",
        r.worst_magnitude, b.worst_magnitude
    );
    Ok(())
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Output> {
    let cfg = &args.run;
    let tol = cfg.tolerance()?;
    let mesh = uniform_mesh(cfg.mesh_size(DEFAULT_MESH)?);
    let mut text = String::from("t,x\n");
    if cfg.family == FamilyArg::Threepoint {
        if args.nonlinear {
            return Err(Error::Configuration(
                "threepoint supports linear forcing only".into(),
            ));
        }
        let (a, b) = (cfg.alpha()?, cfg.beta()?);
        let params = cfg.three_point()?;
        let h = cfg.forcing()?;
        let sol = ThreePointSolution::new(h.as_fn(), a, b, params)?;
        let x = GridFunction::sample(&mesh, |t| sol.eval(t))?;
        for (t, v) in x.rows() {
            csv_line(&mut text, &[t, v]);
        }
        report_trailer(
            &mut text,
            |t| sol.eval(t),
            h.as_fn(),
            &params.bvp(a, b),
            tol,
        )?;
        return Ok(Output {
            text,
            code: EXIT_OK,
        });
    }
    let spec = cfg.kernel()?;
    let bvp = spec.bvp();
    if args.nonlinear {
        let rhs = nonlinearity(args.f, args.lambda)?;
        let report = solve_nonlinear_picard(&spec, &rhs, tol, PICARD_MAX_ITER, &mesh)?;
        for (t, v) in report.solution.rows() {
            csv_line(&mut text, &[t, v]);
        }
        let image = picard_image(&spec, &rhs, &report.previous);
        let forcing = |t: f64| rhs.eval(t, report.solution.eval(t));
        report_trailer(&mut text, |t| image.eval(t), forcing, &bvp, 10.0 * tol)?;
        let _ = writeln!(
            text,
            "# iterations={} change={:e} converged={}",
            report.iterations, report.residual_sup, report.converged
        );
        let code = if report.converged { EXIT_OK } else { EXIT_FAIL };
        return Ok(Output { text, code });
    }
    let h = cfg.forcing()?;
    let sol = LinearSolution::new(spec, h.as_fn());
    let x = sol.sample(&mesh)?;
    for (t, v) in x.rows() {
        csv_line(&mut text, &[t, v]);
    }
    report_trailer(&mut text, |t| sol.eval(t), h.as_fn(), &bvp, tol)?;
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Output> {
    let spec = cfg.kernel()?;
    let config = SuiteConfig {
        grid_points: cfg.mesh_size(101)?,
        tol: cfg.tolerance()?,
        fault: cfg.inject_fault.map(|f| match f {
            FaultArg::SignFlip => Fault::SignFlip,
            FaultArg::PerturbSolution => Fault::PerturbSolution,
        }),
    };
    let reports = run_suite(&spec, &cfg.forcing()?, &config)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_line());
        text.push('\n');
    }
    let code = if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_FAIL
    };
    Ok(Output { text, code })
}

/// Worst two-sided bound violation of the third-order kernel for `tau`
/// across `(0, 1)`, with the other flags held fixed.
pub fn cmd_scan(cfg: &RunConfig) -> Result<Output> {
    if cfg.family != FamilyArg::Rightfocal3 {
        return Err(Error::UnsupportedFamily(
            "scan sweeps tau of rightfocal3".into(),
        ));
    }
    let (a, b, g) = (cfg.alpha()?, cfg.beta()?, order("gamma", cfg.gamma)?);
    let n = cfg.mesh_size(101)?;
    let grid = uniform_mesh(101);
    let mut text = String::from("tau,violation\n");
    for &tau in uniform_mesh(n).iter().filter(|&&t| t > 0.0 && t < 1.0) {
        let spec = KernelSpec::right_focal3(a, b, g, tau)?;
        let r = check_two_sided_bound(&spec, &grid)?;
        csv_line(&mut text, &[tau, r.worst_magnitude]);
    }
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

fn emit(out: &Option<String>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergence { .. } => EXIT_DIVERGED,
        Error::Configuration(_) | Error::Parameter(_) | Error::UnsupportedFamily(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let mut stderr = io::stderr();
    let (result, out) = match &cli.command {
        Command::Eval(cfg) => (cmd_eval(cfg, &mut stderr), &cfg.out),
        Command::Solve(args) => (cmd_solve(args), &args.run.out),
        Command::Verify(cfg) => (cmd_verify(cfg), &cfg.out),
        Command::Scan(cfg) => (cmd_scan(cfg), &cfg.out),
    };
    match result {
        Ok(output) => {
            if let Err(e) = emit(out, &output.text) {
                eprintln!("error: cannot write output: {e}");
                return EXIT_FAIL;
            }
            output.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
