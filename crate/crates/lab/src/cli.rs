//! Command-line front end: argument parsing, plan resolution, the worker
//! pool and exit codes (0 success, 1 verification failure, 2 bad input).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::{error, info};

use crate::defaults::Defaults;
use crate::error::{LabError, Result};
use crate::experiments::execute;
use crate::plan::{ExperimentPlan, Overrides, PlanFile, PlanKind};

/// Environment variable holding the worker count (default: all cores).
pub const WORKERS_ENV: &str = "HARTREE_LAB_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "hartree-lab", version, about = "Verification and blow-up experiments for radial Hartree-type wave equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sphere-mean identity against direct angular quadrature.
    VerifyIdentity(Common),
    /// Radial convolution against direct integration and the Newton potential.
    VerifyKernel(Common),
    /// Closed forms and the induction lower bound of the iteration sequences.
    VerifySequences(Common),
    /// One finite-difference run with the positivity monitor.
    Simulate(Common),
    /// Numerical lifespans over a log-spaced eps ladder and a power-law fit.
    LifespanSweep(Common),
    /// Critical exponents of (n, gamma, mu) as a JSON object.
    Exponents(Common),
}

impl Command {
    pub fn kind(&self) -> PlanKind {
        match self {
            Command::VerifyIdentity(_) => PlanKind::VerifyIdentity,
            Command::VerifyKernel(_) => PlanKind::VerifyKernel,
            Command::VerifySequences(_) => PlanKind::VerifySequences,
            Command::Simulate(_) => PlanKind::Simulate,
            Command::LifespanSweep(_) => PlanKind::LifespanSweep,
            Command::Exponents(_) => PlanKind::ExponentsReport,
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::VerifyIdentity(c)
            | Command::VerifyKernel(c)
            | Command::VerifySequences(c)
            | Command::Simulate(c)
            | Command::LifespanSweep(c)
            | Command::Exponents(c) => c,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON plan file; flags override its values.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Output root; artifacts go to <out>/<kind>/<timestamp>/.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub jmax: Option<u32>,
    #[arg(long)]
    pub dr: Option<f64>,
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
}

impl Common {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            gamma: self.gamma,
            mu: self.mu,
            nu: self.nu,
            eps: self.eps,
            out: self.out.clone(),
            seed: self.seed,
            jmax: self.jmax,
            dr: self.dr,
            r_max: self.r_max,
            t_max: self.t_max,
        }
    }
}

/// Worker count from [`WORKERS_ENV`], or the machine's parallelism.
pub fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(LabError::Config(format!("{WORKERS_ENV} must be a positive integer, got `{s}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|k| k.get()).unwrap_or(1)),
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let defaults = Defaults::builtin();
    let kind = cli.command.kind();
    let common = cli.command.common();
    let file = common.plan.as_deref().map(PlanFile::load).transpose()?;
    let plan = ExperimentPlan::resolve(kind, file, &common.overrides(), &defaults)?;
    let workers = workers_from_env()?;
    // a second call in the same process (tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    let summary = execute(&plan, &defaults, workers)?;
    if let Some(text) = &summary.stdout {
        println!("{text}");
    }
    info!("artifacts in {}", summary.dir.display());
    for f in &summary.failures {
        error!("{f}");
    }
    if !summary.passed {
        eprintln!("{} check(s) failed; see {}", summary.failures.len(), summary.dir.join("manifest.json").display());
        for f in &summary.failures {
            eprintln!("  {f}");
        }
    }
    Ok(summary.passed || !kind.is_verification())
}

/// Parses `argv`, runs the plan and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
