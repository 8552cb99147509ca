use alloc::format;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::run::{run_with, LifespanRecord, RunStatus};
use super::scheme::{Formulation, InitialData};
use crate::error::{invalid, Error, Result};
use crate::exponents::ProblemSpec;
use crate::iteration::{first_step_lower_bound, in_region};
use crate::radial_kernel::ConvolutionOperator;
use crate::wave_rep::{region_delta, SpaceTimeField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonPositive,
    BelowFirstStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub r: f64,
    pub t: f64,
    pub u: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    /// Grid points with `t > 0` inside the wedge.
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Smallest `u / first_step_lower_bound` over the checked points.
    pub min_ratio: f64,
    pub tolerance: f64,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.violations.is_empty()
    }
}

pub const DEFAULT_POSITIVITY_TOLERANCE: f64 = 0.05;

/// Checks `u > 0` and `u >= (1 - tol) first_step_lower_bound` at every
/// stored grid point `(r, t)` with `t > 0` in the wedge
/// `r - t >= max(R, delta t)` (`x - t >= R` for `n = 1`).
pub fn positivity_monitor(trajectory: &SpaceTimeField, spec: &ProblemSpec, tol: f64) -> PositivityReport {
    let delta = if spec.n() == 1 { 0.0 } else { region_delta(spec.n()) };
    let nodes = trajectory.grid().nodes();
    let mut report = PositivityReport {
        checked: 0,
        violations: Vec::new(),
        min_ratio: f64::INFINITY,
        tolerance: tol,
    };
    for (k, level) in trajectory.levels().iter().enumerate() {
        let t = trajectory.level_time(k);
        if t <= 0.0 {
            continue;
        }
        for (&r, &u) in nodes.iter().zip(level) {
            if !in_region(r, t, spec, delta) {
                continue;
            }
            report.checked += 1;
            let bound = first_step_lower_bound(r, t, spec).unwrap_or(0.0);
            if !(u > 0.0) {
                report.violations.push(Violation {
                    kind: ViolationKind::NonPositive,
                    r,
                    t,
                    u,
                    bound,
                });
                report.min_ratio = report.min_ratio.min(0.0);
                continue;
            }
            if bound > 0.0 {
                report.min_ratio = report.min_ratio.min(u / bound);
                if u < (1.0 - tol) * bound {
                    report.violations.push(Violation {
                        kind: ViolationKind::BelowFirstStep,
                        r,
                        t,
                        u,
                        bound,
                    });
                }
            }
        }
    }
    report
}

/// Least-squares fit `log y = slope log x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(invalid("points", "need at least two (x, y) pairs of equal length"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(invalid("points", "power-law fit needs positive data"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(invalid("x", "abscissae coincide"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok(PowerLawFit {
        slope,
        intercept: my - slope * mx,
        points: x.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub records: Vec<LifespanRecord>,
    /// `eps` values whose run reached `t_max` without a trigger.
    pub excluded: Vec<f64>,
    pub fit: Option<PowerLawFit>,
    /// `-2 / (n - gamma - 2 nu)`.
    pub theoretical_exponent: f64,
}

impl SweepReport {
    /// Whether `t_mid` is nonincreasing in `eps` over the triggered runs.
    pub fn monotone(&self) -> bool {
        let mut pairs: Vec<(f64, f64)> = self.records.iter().map(|r| (r.eps, r.t_mid())).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

/// Checks that `specs` differ only in `eps` and that the `eps` values are
/// log-spaced; returns them sorted.
pub fn check_ladder(specs: &[ProblemSpec]) -> Result<Vec<f64>> {
    let first = specs
        .first()
        .ok_or_else(|| invalid("specs", "empty sweep"))?;
    for s in specs {
        if s.with_eps(first.eps())? != *first {
            return Err(invalid("specs", "sweep specs must differ only in eps"));
        }
    }
    let mut eps: Vec<f64> = specs.iter().map(|s| s.eps()).collect();
    eps.sort_by(f64::total_cmp);
    if eps.len() > 2 {
        let ratio = (eps[1] / eps[0]).ln();
        if eps
            .windows(2)
            .any(|w| ((w[1] / w[0]).ln() - ratio).abs() > 1e-6 * ratio.abs().max(1.0))
        {
            return Err(invalid("specs", "eps values must be log-spaced"));
        }
    }
    Ok(eps)
}

/// Sweep summary from records computed elsewhere (e.g. in parallel).
pub fn summarize_sweep(spec: &ProblemSpec, outcomes: Vec<(f64, Option<LifespanRecord>)>) -> Result<SweepReport> {
    let mut records = Vec::new();
    let mut excluded = Vec::new();
    for (eps, rec) in outcomes {
        match rec {
            Some(r) => records.push(r),
            None => excluded.push(eps),
        }
    }
    records.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    let fit = if records.len() >= 2 {
        let x: Vec<f64> = records.iter().map(|r| r.eps).collect();
        let y: Vec<f64> = records.iter().map(|r| r.t_mid()).collect();
        Some(fit_power_law(&x, &y)?)
    } else {
        None
    };
    Ok(SweepReport {
        records,
        excluded,
        fit,
        theoretical_exponent: -2.0 / spec.supercritical_gap(),
    })
}

/// Runs each spec on one shared kernel and fits `t_mid ~ eps^slope`.
pub fn estimate_lifespan_sweep(
    specs: &[ProblemSpec],
    config: &SolverConfig,
    kernel: &dyn ConvolutionOperator,
) -> Result<SweepReport> {
    check_ladder(specs)?;
    let mut outcomes = Vec::with_capacity(specs.len());
    for spec in specs {
        let out = run_with(spec, config, kernel, InitialData::SlowDecay, Formulation::Undamped)?;
        let rec = match out.status {
            RunStatus::BlowUp(r) => Some(r),
            RunStatus::Completed { .. } => None,
        };
        outcomes.push((spec.eps(), rec));
    }
    summarize_sweep(&specs[0], outcomes)
}

/// Observed order `log2(|u_c - u_m| / |u_m - u_f|)` from three solutions on
/// grids refined by factors of two, compared in the max norm at the coarse
/// nodes (`fine` has four times, `medium` twice as many intervals).
pub fn observed_order(coarse: &[f64], medium: &[f64], fine: &[f64]) -> Result<f64> {
    let nc = coarse.len();
    if medium.len() < 2 * (nc - 1) + 1 || fine.len() < 4 * (nc - 1) + 1 {
        return Err(Error::GridMismatch(format!(
            "three-grid study needs nested grids, got {} / {} / {} nodes",
            nc,
            medium.len(),
            fine.len()
        )));
    }
    let mut e1: f64 = 0.0;
    let mut e2: f64 = 0.0;
    for i in 0..nc {
        e1 = e1.max((coarse[i] - medium[2 * i]).abs());
        e2 = e2.max((medium[2 * i] - fine[4 * i]).abs());
    }
    if e2 == 0.0 {
        return Err(invalid("fine", "medium and fine solutions coincide"));
    }
    Ok((e1 / e2).log2())
}
