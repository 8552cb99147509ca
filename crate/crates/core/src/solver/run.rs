use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::scheme::{free_boundary, Formulation, InitialData, Solver};
use crate::error::{Error, Result};
use crate::exponents::ProblemSpec;
use crate::radial_kernel::{build_kernel_matrix, ConvolutionOperator, GridLayout, NewtonPotential, RadialGrid};
use crate::wave_rep::SpaceTimeField;

/// Counters and extremes of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    pub steps: usize,
    pub dt: f64,
    pub dr: f64,
    pub threshold: f64,
    /// Largest finite sup-norm seen.
    pub max_field: f64,
    /// Step-resolved times at which `sup |u|` first reached `M 2^k`.
    pub doubling_times: Vec<f64>,
    pub non_finite: bool,
}

/// Numerical blow-up time bracket for one `eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifespanRecord {
    pub eps: f64,
    pub t_blow_lo: f64,
    pub t_blow_hi: f64,
    /// Set once a run at `dr / 2` produced a bracket at least 25% narrower.
    pub refined: bool,
    pub diagnostics: RunDiagnostics,
}

impl LifespanRecord {
    pub fn t_mid(&self) -> f64 {
        0.5 * (self.t_blow_lo + self.t_blow_hi)
    }

    pub fn width(&self) -> f64 {
        self.t_blow_hi - self.t_blow_lo
    }
}

/// Value of `u` along the probe ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub t: f64,
    pub r: f64,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed { t_end: f64, diagnostics: RunDiagnostics },
    BlowUp(LifespanRecord),
}

impl RunStatus {
    pub fn record(&self) -> Option<&LifespanRecord> {
        match self {
            RunStatus::BlowUp(r) => Some(r),
            RunStatus::Completed { .. } => None,
        }
    }

    pub fn diagnostics(&self) -> &RunDiagnostics {
        match self {
            RunStatus::BlowUp(r) => &r.diagnostics,
            RunStatus::Completed { diagnostics, .. } => diagnostics,
        }
    }
}

pub struct RunOutcome {
    /// Stored levels, every `snapshot_every` steps from `t = 0`.
    pub trajectory: SpaceTimeField,
    pub probe: Vec<ProbeSample>,
    pub status: RunStatus,
}

/// Uniform linear grid of the configuration.
pub fn solver_grid(config: &SolverConfig) -> Result<Arc<RadialGrid>> {
    Ok(Arc::new(RadialGrid::uniform(config.dr, config.r_max, 1)?))
}

/// The `O(N)` Newton potential for `n = 3, gamma = 1`, a dense kernel
/// matrix otherwise.
pub fn default_operator(grid: Arc<RadialGrid>, n: u32, gamma: f64) -> Result<Box<dyn ConvolutionOperator>> {
    if n == 3 && gamma == 1.0 {
        Ok(Box::new(NewtonPotential::new(grid)?))
    } else {
        Ok(Box::new(build_kernel_matrix(grid, n, gamma)?))
    }
}

/// Marches the undamped equation for the default data until blow-up or `t_max`.
pub fn run(spec: &ProblemSpec, config: &SolverConfig) -> Result<RunOutcome> {
    config.validate(spec)?;
    let grid = solver_grid(config)?;
    let kernel = default_operator(grid, spec.n(), spec.gamma())?;
    run_with(spec, config, kernel.as_ref(), InitialData::SlowDecay, Formulation::Undamped)
}

/// [`run`] with a prebuilt kernel matrix (shared across runs on one grid),
/// arbitrary data profile and either formulation.
pub fn run_with(
    spec: &ProblemSpec,
    config: &SolverConfig,
    kernel: &dyn ConvolutionOperator,
    data: InitialData,
    formulation: Formulation,
) -> Result<RunOutcome> {
    config.validate(spec)?;
    let grid = kernel.grid().clone();
    if grid.layout() != (GridLayout::Uniform { dr: config.dr, order: 1 })
        || (grid.r_max() - config.r_max).abs() > config.dr
    {
        return Err(Error::GridMismatch(
            String::from("kernel grid does not match the configured dr / r_max"),
        ));
    }
    if kernel.gamma() != spec.gamma() {
        return Err(Error::GridMismatch(String::from("kernel built for another gamma")));
    }
    let dt = config.time_step();
    let eps = spec.eps();
    let position = vec![0.0; grid.len()];
    let velocity: Vec<f64> = grid.nodes().iter().map(|&r| eps * data.g(spec, r)).collect();
    let boundary = free_boundary(*spec, data, formulation, grid.r_max())?;
    let mut solver = Solver::new(
        grid.clone(),
        spec.n(),
        formulation,
        Some(kernel),
        dt,
        &position,
        &velocity,
        boundary,
    )?;

    let threshold = config.threshold(spec);
    let probe = config.probe_for(spec);
    let every = config.snapshot_every;
    let mut trajectory = SpaceTimeField::new(grid.clone(), 0.0, every as f64 * dt)?;
    trajectory.push_level(position)?;
    let mut samples = Vec::new();
    let record_probe = |t: f64, values: &[f64], out: &mut Vec<ProbeSample>| {
        if let Some(r) = probe.radius(t) {
            out.push(ProbeSample {
                t,
                r,
                u: grid.interpolate_linear(values, r),
            });
        }
    };
    record_probe(0.0, trajectory.levels()[0].as_slice(), &mut samples);

    let mut diagnostics = RunDiagnostics {
        steps: 0,
        dt,
        dr: config.dr,
        threshold,
        max_field: 0.0,
        doubling_times: Vec::new(),
        non_finite: false,
    };
    let total_steps = (config.t_max / dt - 1e-9).ceil() as usize;
    let cap = threshold * 2f64.powi(config.doublings as i32);
    let mut prev_time = 0.0;
    loop {
        let t = solver.time();
        let sup = solver.sup_norm();
        diagnostics.steps = solver.steps();
        if sup.is_finite() {
            diagnostics.max_field = diagnostics.max_field.max(sup);
            if solver.steps() % every == 0 {
                trajectory.push_level(solver.current().to_vec())?;
            }
            record_probe(t, solver.current(), &mut samples);
        } else {
            diagnostics.non_finite = true;
        }
        let mut level = threshold * 2f64.powi(diagnostics.doubling_times.len() as i32);
        while sup >= level && diagnostics.doubling_times.len() <= config.doublings as usize {
            diagnostics.doubling_times.push(t);
            level *= 2.0;
        }
        if sup >= cap || !sup.is_finite() {
            let record = LifespanRecord {
                eps,
                t_blow_lo: prev_time,
                t_blow_hi: t,
                refined: false,
                diagnostics,
            };
            return Ok(RunOutcome {
                trajectory,
                probe: samples,
                status: RunStatus::BlowUp(record),
            });
        }
        if solver.steps() >= total_steps {
            return Ok(RunOutcome {
                trajectory,
                probe: samples,
                status: RunStatus::Completed {
                    t_end: t,
                    diagnostics,
                },
            });
        }
        prev_time = t;
        solver.advance();
    }
}

/// Result of a run at `dr` and at `dr / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinedLifespan {
    pub coarse: LifespanRecord,
    pub fine: LifespanRecord,
    /// `1 - width_fine / width_coarse`.
    pub shrink: f64,
}

/// Compares two blow-up records of one `eps` at `dr` and `dr / 2` and sets
/// `refined` on both when the bracket shrank by at least 25%.
pub fn confirm_refinement(mut coarse: LifespanRecord, mut fine: LifespanRecord) -> RefinedLifespan {
    let shrink = 1.0 - fine.width() / coarse.width();
    let ok = shrink >= 0.25 && fine.t_blow_lo < fine.t_blow_hi;
    coarse.refined = ok;
    fine.refined = ok;
    RefinedLifespan { coarse, fine, shrink }
}

/// Runs at `dr` and `dr / 2` (building both kernels) and confirms the bracket.
pub fn refine_lifespan(spec: &ProblemSpec, config: &SolverConfig) -> Result<RefinedLifespan> {
    let coarse = run(spec, config)?;
    let fine = run(spec, &config.refined())?;
    match (coarse.status, fine.status) {
        (RunStatus::BlowUp(c), RunStatus::BlowUp(f)) => Ok(confirm_refinement(c, f)),
        _ => Err(Error::Hypothesis {
            hypothesis: "blow-up within t_max",
            detail: alloc::format!("eps = {}: no trigger on one of the grids", spec.eps()),
        }),
    }
}
