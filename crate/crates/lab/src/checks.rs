//! The verification experiments, shared by the command-line front end and
//! the acceptance suite. Every check returns its raw per-case data plus a
//! list of failures; deciding how to report them is up to the caller.

use std::sync::Arc;

use hartree_core::exponents::ProblemSpec;
use hartree_core::iteration::{
    c_lower_bound, closed_form, induction_slack, BlowupConstants, IterationParams, IterationState,
};
use hartree_core::radial_kernel::{
    apply_convolution, john_sphere_mean, ConvolutionOperator, QuadratureSettings, RadialConvolution, RadialGrid,
};
use hartree_core::solver::{
    confirm_refinement, observed_order, positivity_monitor, run_with, summarize_sweep, Formulation, InitialData,
    Picard, PositivityReport, Probe, RefinedLifespan, RunStatus, Solver, SolverConfig, SweepReport,
};
use hartree_core::wave_rep::{FieldMeta, RadialField, RepresentationSettings};
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defaults::{IdentityDefaults, KernelDefaults, SweepDefaults};
use crate::error::{LabError, Result};
use crate::kernels::{build_kernel_parallel, operator_for, KernelCache};
use crate::oracle::{oracle_direct_convolution_with, oracle_sphere_quadrature, OracleSettings, RadialProfile};

fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

/// Evaluates `sum c_k eta^k`.
fn polynomial(coeffs: &[f64], eta: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * eta + c)
}

// ---------------------------------------------------------------- identity

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCase {
    pub n: u32,
    pub r: f64,
    pub rho: f64,
    pub degree: usize,
    pub john: f64,
    pub oracle: f64,
    pub rel_err: f64,
}

/// `john_sphere_mean` against the polar-angle oracle on random radii and
/// random polynomials `b(eta) = sum_k c_k eta^k` with `c_k` uniform in
/// `[0, 1)` (so `b > 0` and the relative error is well conditioned).
pub fn identity_suite(cfg: &IdentityDefaults, seed: u64) -> Result<(Vec<IdentityCase>, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for &n in &cfg.dimensions {
        for _ in 0..cfg.cases_per_dimension {
            let r = rng.gen_range(0.05..3.0);
            let rho = rng.gen_range(0.05..3.0);
            let degree = rng.gen_range(0..=cfg.max_degree as usize);
            let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen::<f64>()).collect();
            let b = |eta: f64| polynomial(&coeffs, eta);
            let john = john_sphere_mean(b, r, rho, n)?;
            let oracle = oracle_sphere_quadrature(b, r, rho, n);
            let e = rel_err(john, oracle);
            if !(e <= cfg.rel_tol) {
                failures.push(format!(
                    "identity n={n} r={r} rho={rho} degree={degree}: rel err {e:e} > {:e}",
                    cfg.rel_tol
                ));
            }
            cases.push(IdentityCase {
                n,
                r,
                rho,
                degree,
                john,
                oracle,
                rel_err: e,
            });
        }
    }
    Ok((cases, failures))
}

// ---------------------------------------------------------------- kernel

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCase {
    pub n: u32,
    pub gamma: f64,
    pub r: f64,
    pub value: f64,
    pub reference: f64,
    /// Oracle error estimate (one standard error for Monte Carlo).
    pub reference_error: f64,
    pub rel_err: f64,
    pub method: String,
}

/// `apply_convolution` against the direct-integration oracle for smooth
/// compactly supported data, plus the unit-ball Newton potential.
pub fn kernel_suite(
    cfg: &KernelDefaults,
    seed: u64,
    cache: Option<&KernelCache>,
) -> Result<(Vec<KernelCase>, Vec<String>)> {
    let support = 1.5;
    let profile = RadialProfile::polynomial_bump(support, 6);
    let grid = Arc::new(RadialGrid::gauss_uniform_panels(cfg.panel, support, cfg.panel_points)?);
    let oracle_settings = OracleSettings {
        samples: cfg.samples,
        strata: cfg.strata,
        angular_strata: cfg.angular_strata,
        ..OracleSettings::default()
    };
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for &n in &cfg.dimensions {
        for gamma in [0.5, 1.0, n as f64 - 0.5] {
            let k = match cache {
                Some(c) => c.get_or_build(grid.clone(), n, gamma, QuadratureSettings::default())?,
                None => build_kernel_parallel(grid.clone(), n, gamma, QuadratureSettings::default())?,
            };
            let u = RadialField::from_fn(grid.clone(), 0.0, FieldMeta::default(), |r| profile.eval(r))?;
            let out = apply_convolution(&k, &u)?;
            let stride = (grid.len() / 6).max(1);
            for i in (0..grid.len()).step_by(stride) {
                let r = grid.nodes()[i];
                let o = oracle_direct_convolution_with(&profile, r, n, gamma, seed.wrapping_add(i as u64), &oracle_settings)?;
                let value = out.values()[i];
                let e = rel_err(value, o.value);
                let monte_carlo = n >= 4;
                let ok = if monte_carlo {
                    (value - o.value).abs() <= cfg.monte_carlo_sigmas * o.error && e <= cfg.monte_carlo_rel_tol
                } else {
                    e <= cfg.adaptive_rel_tol
                };
                if !ok {
                    failures.push(format!(
                        "convolution n={n} gamma={gamma} r={r}: {value} vs oracle {} (+/- {:e}), rel err {e:e}",
                        o.value, o.error
                    ));
                }
                cases.push(KernelCase {
                    n,
                    gamma,
                    r,
                    value,
                    reference: o.value,
                    reference_error: o.error,
                    rel_err: e,
                    method: if monte_carlo { "monte_carlo" } else { "adaptive" }.into(),
                });
            }
        }
    }
    let (newton, newton_failures) = newton_cases(&cfg.newton_radii, cfg.newton_rel_tol)?;
    cases.extend(newton);
    failures.extend(newton_failures);
    Ok((cases, failures))
}

/// `G_1` of the unit-ball indicator in `R^3` outside the ball equals
/// `(4 pi / 3) / r`. The product weights are taken on a grid covering the
/// support exactly, so the interpolant is the indicator itself.
pub fn newton_cases(radii: &[f64], tol: f64) -> Result<(Vec<KernelCase>, Vec<String>)> {
    let grid = RadialGrid::gauss_uniform_panels(0.25, 1.0, 8)?;
    let op = RadialConvolution::new(3, 1.0, QuadratureSettings::default())?;
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for &r in radii {
        let value: f64 = op.row(&grid, r).values.iter().sum();
        let exact = 4.0 * std::f64::consts::PI / (3.0 * r);
        let e = rel_err(value, exact);
        if !(e <= tol) {
            failures.push(format!("newton potential r={r}: {value} vs {exact}, rel err {e:e}"));
        }
        cases.push(KernelCase {
            n: 3,
            gamma: 1.0,
            r,
            value,
            reference: exact,
            reference_error: 0.0,
            rel_err: e,
            method: "closed_form".into(),
        });
    }
    Ok((cases, failures))
}

// ---------------------------------------------------------------- sequences

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactnessCase {
    pub n: u32,
    pub gamma: f64,
    pub nu: f64,
    pub jmax: u32,
    pub all_equal: bool,
    /// First `j` where the closed form and the recurrence differ.
    pub first_mismatch: Option<u32>,
}

/// Random `(n, gamma, nu)` with `gamma` in `(0, n)` and `nu` in `(0, 2)`.
pub fn random_tuples(count: usize, seed: u64) -> Vec<(u32, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=7u32);
            let gamma = n as f64 * rng.gen_range(0.01..0.99);
            let nu = rng.gen_range(0.01..2.0);
            (n, gamma, nu)
        })
        .collect()
}

/// Closed forms against iterated `advance`, exact rational equality.
pub fn exactness_suite(tuples: &[(u32, f64, f64)], jmax: u32) -> Result<(Vec<ExactnessCase>, Vec<String>)> {
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for &(n, gamma, nu) in tuples {
        let spec = ProblemSpec::new(n, gamma, 2.0, nu, 1.0, 1.0, 1.0)?;
        let params = IterationParams::from_spec(&spec);
        let mut state = IterationState::initial(params, 1.0)?;
        let mut first_mismatch = None;
        for j in 1..=jmax {
            if j > 1 {
                state = state.advance()?;
            }
            let (a, b, d) = closed_form(j, &params)?;
            if first_mismatch.is_none() && (a != *state.a() || b != *state.b() || d != *state.d()) {
                first_mismatch = Some(j);
            }
        }
        if let Some(j) = first_mismatch {
            failures.push(format!("closed form n={n} gamma={gamma} nu={nu}: mismatch at j={j}"));
        }
        cases.push(ExactnessCase {
            n,
            gamma,
            nu,
            jmax,
            all_equal: first_mismatch.is_none(),
            first_mismatch,
        });
    }
    Ok((cases, failures))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InductionCase {
    pub n: u32,
    pub gamma: f64,
    pub nu: f64,
    pub amplitude: f64,
    pub eps: f64,
    pub j: u32,
    pub log_c: f64,
    pub log_bound: f64,
    pub slack: f64,
}

/// The induction bound points: the reference case plus one planar and one
/// one-dimensional case.
pub fn induction_points() -> Vec<ProblemSpec> {
    vec![
        ProblemSpec::new(3, 1.0, 2.0, 0.5, 8.0, 1.0, 1.0).expect("valid"),
        ProblemSpec::new(2, 1.0, 2.0, 0.25, 8.0, 1.0, 1.0).expect("valid"),
        ProblemSpec::new(1, 0.5, 2.0, 0.1, 8.0, 1.0, 1.0).expect("valid"),
    ]
}

/// `c_lower_bound(j) <= log c_j` for `j <= jmax`, within `tol` in log space.
pub fn induction_suite(
    points: &[ProblemSpec],
    jmax: u32,
    tol: f64,
) -> Result<(Vec<InductionCase>, Vec<String>)> {
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for spec in points {
        let consts = BlowupConstants::new(spec)?;
        let params = IterationParams::from_spec(spec);
        let mut state = IterationState::from_constants(&consts, params)?;
        for j in 1..=jmax {
            if j > 1 {
                state = state.advance()?;
            }
            let slack = induction_slack(&state, &consts);
            let bound = c_lower_bound(j, &consts, params.c1())?;
            if !(slack >= -tol) {
                failures.push(format!(
                    "induction n={} gamma={} nu={} j={j}: slack {slack:e}",
                    spec.n(),
                    spec.gamma(),
                    spec.nu()
                ));
            }
            cases.push(InductionCase {
                n: spec.n(),
                gamma: spec.gamma(),
                nu: spec.nu(),
                amplitude: spec.amplitude(),
                eps: spec.eps(),
                j,
                log_c: state.log_c(),
                log_bound: bound,
                slack,
            });
        }
    }
    Ok((cases, failures))
}

// ---------------------------------------------------------------- solver

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityOutcome {
    pub n: u32,
    pub report: PositivityReport,
    pub blew_up: bool,
    pub t_end: f64,
}

/// One run of the default data with the positivity monitor on every level.
pub fn positivity_check(
    spec: &ProblemSpec,
    config: &SolverConfig,
    tol: f64,
    cache: Option<&KernelCache>,
) -> Result<PositivityOutcome> {
    let config = SolverConfig {
        snapshot_every: 1,
        ..*config
    };
    config.validate(spec)?;
    let grid = hartree_core::solver::solver_grid(&config)?;
    let op = operator_for(grid, spec.n(), spec.gamma(), cache)?;
    let out = run_with(spec, &config, op.as_ref(), InitialData::SlowDecay, Formulation::Undamped)?;
    let report = positivity_monitor(&out.trajectory, spec, tol);
    Ok(PositivityOutcome {
        n: spec.n(),
        report,
        blew_up: matches!(out.status, RunStatus::BlowUp(_)),
        t_end: out.trajectory.t_end(),
    })
}

/// Largest `|u - (1 + t) v| / max |u|` over all stored levels.
pub fn liouville_check(spec: &ProblemSpec, config: &SolverConfig, op: &dyn ConvolutionOperator) -> Result<f64> {
    let u = run_with(spec, config, op, InitialData::SlowDecay, Formulation::Undamped)?;
    let v = run_with(spec, config, op, InitialData::SlowDecay, Formulation::Damped)?;
    let mut worst: f64 = 0.0;
    for (k, (lu, lv)) in u.trajectory.levels().iter().zip(v.trajectory.levels()).enumerate() {
        let t = u.trajectory.level_time(k);
        let scale = lu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            continue;
        }
        let diff = lu
            .iter()
            .zip(lv)
            .fold(0.0f64, |m, (a, b)| m.max((a - (1.0 + t) * b).abs()));
        worst = worst.max(diff / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOutcome {
    pub regime: String,
    pub n: u32,
    pub dr: [f64; 3],
    pub order: f64,
}

/// Three-grid self-convergence of the free wave equation (no source) with
/// Gaussian velocity data, at `dr`, `dr/2`, `dr/4`.
pub fn linear_convergence(n: u32, dr: f64, r_max: f64, t_end: f64) -> Result<ConvergenceOutcome> {
    let sols = [dr, dr / 2.0, dr / 4.0]
        .iter()
        .map(|&h| {
            let grid = Arc::new(RadialGrid::uniform(h, r_max, 1)?);
            let vel: Vec<f64> = grid.nodes().iter().map(|&r| (-r * r).exp()).collect();
            let pos = vec![0.0; grid.len()];
            let dt = 0.5 * h;
            let mut s = Solver::new(grid, n, Formulation::Undamped, None, dt, &pos, &vel, Box::new(|_| 0.0))?;
            let steps = (t_end / dt).round() as usize;
            while s.steps() < steps {
                s.advance();
            }
            Ok(s.current().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceOutcome {
        regime: "linear".into(),
        n,
        dr: [dr, dr / 2.0, dr / 4.0],
        order: observed_order(&sols[0], &sols[1], &sols[2])?,
    })
}

/// Three-grid self-convergence of the full nonlinear problem before
/// blow-up, Gaussian data, final level compared at the coarse nodes.
/// `snapshot_every` must divide the step count so the final level is stored.
pub fn nonlinear_convergence(spec: &ProblemSpec, config: &SolverConfig, width: f64) -> Result<ConvergenceOutcome> {
    let mut finals = Vec::new();
    let mut drs = [0.0; 3];
    for (i, cfg) in [*config, config.refined(), config.refined().refined()].iter().enumerate() {
        let cfg = SolverConfig {
            probe: Some(Probe::Off),
            ..*cfg
        };
        drs[i] = cfg.dr;
        let grid = hartree_core::solver::solver_grid(&cfg)?;
        let op = operator_for(grid, spec.n(), spec.gamma(), None)?;
        let out = run_with(spec, &cfg, op.as_ref(), InitialData::Gaussian { width }, Formulation::Undamped)?;
        if let RunStatus::BlowUp(r) = out.status {
            return Err(LabError::Config(format!(
                "nonlinear convergence run triggered at t = {}; shorten t_max",
                r.t_blow_hi
            )));
        }
        let last = out.trajectory.levels().last().cloned().unwrap_or_default();
        finals.push(last);
    }
    Ok(ConvergenceOutcome {
        regime: "nonlinear".into(),
        n: spec.n(),
        dr: drs,
        order: observed_order(&finals[0], &finals[1], &finals[2])?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardOutcome {
    pub residuals: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `max |u_2 - u_fd| / max |u_fd|` over the compared levels and radii.
    pub rel_err: f64,
    /// Same for the free solution alone, to show the nonlinear part matters.
    pub free_rel_err: f64,
}

/// Second Picard iterate against the finite-difference solution on
/// `[0, horizon]` at `levels` equally spaced times, compared on
/// `r <= r_max - horizon - 1` (away from the truncated boundary).
pub fn picard_check(
    spec: &ProblemSpec,
    config: &SolverConfig,
    horizon: f64,
    levels: usize,
    iterations: usize,
) -> Result<PicardOutcome> {
    if levels < 2 {
        return Err(LabError::Config("field `levels`: need at least two Picard levels".into()));
    }
    // largest step <= cfl dr that divides the level spacing
    let spacing = horizon / (levels - 1) as f64;
    let every = (spacing / (config.cfl * config.dr) - 1e-9).ceil().max(1.0) as usize;
    let dt = spacing / every as f64;
    let cfg = SolverConfig {
        t_max: horizon,
        snapshot_every: every,
        probe: Some(Probe::Off),
        dt: Some(dt),
        ..*config
    };
    let grid = hartree_core::solver::solver_grid(&cfg)?;
    let op = operator_for(grid, spec.n(), spec.gamma(), None)?;
    let fd = run_with(spec, &cfg, op.as_ref(), InitialData::SlowDecay, Formulation::Undamped)?;
    let picard = Picard::new(
        spec,
        op.as_ref(),
        InitialData::SlowDecay,
        spacing,
        levels,
        RepresentationSettings::default(),
    )?;
    let (iterates, report) = hartree_core::solver::picard_sequence(&picard, iterations)?;
    let second = &iterates[2.min(iterates.len() - 1)];
    let free = &iterates[1];
    let nodes = op.grid().nodes();
    let limit = cfg.r_max - horizon - 1.0;
    let mut scale: f64 = 0.0;
    let mut err: f64 = 0.0;
    let mut free_err: f64 = 0.0;
    for (k, level) in fd.trajectory.levels().iter().enumerate().take(levels) {
        for (i, &r) in nodes.iter().enumerate() {
            if r > limit {
                break;
            }
            scale = scale.max(level[i].abs());
            err = err.max((second.levels()[k][i] - level[i]).abs());
            free_err = free_err.max((free.levels()[k][i] - level[i]).abs());
        }
    }
    info!("picard: residuals {:?}", report.residuals);
    Ok(PicardOutcome {
        residuals: report.residuals,
        ratios: report.ratios,
        rel_err: err / scale,
        free_rel_err: free_err / scale,
    })
}

// ---------------------------------------------------------------- sweep

/// Configuration of one `eps` of the sweep.
pub fn sweep_config(eps: f64, cfg: &SweepDefaults) -> SolverConfig {
    let t_max = cfg.t_max_scale / (eps * eps);
    SolverConfig {
        dr: cfg.dr,
        r_max: cfg.r_max_factor * t_max,
        t_max,
        probe: Some(Probe::Off),
        snapshot_every: usize::MAX / 2,
        ..SolverConfig::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub report: SweepReport,
    pub refinements: Vec<RefinedLifespan>,
    pub failures: Vec<String>,
}

/// Runs one `eps` to blow-up (or `t_max`) with the configured resolution.
pub fn lifespan_run(spec: &ProblemSpec, config: &SolverConfig) -> Result<Option<hartree_core::solver::LifespanRecord>> {
    let grid = hartree_core::solver::solver_grid(config)?;
    let op = operator_for(grid, spec.n(), spec.gamma(), None)?;
    let out = run_with(spec, config, op.as_ref(), InitialData::SlowDecay, Formulation::Undamped)?;
    Ok(match out.status {
        RunStatus::BlowUp(r) => Some(r),
        RunStatus::Completed { .. } => None,
    })
}

/// The `eps` ladder in parallel (one run per worker), then the two extreme
/// points again at `dr / 2`. `on_record` is called from the workers as
/// records arrive (e.g. to write per-worker files).
pub fn lifespan_sweep(
    base: &ProblemSpec,
    ladder: &[f64],
    cfg: &SweepDefaults,
    on_record: &(dyn Fn(usize, f64, &Option<hartree_core::solver::LifespanRecord>) -> Result<()> + Sync),
) -> Result<SweepOutcome> {
    let specs: Vec<ProblemSpec> = ladder.iter().map(|&e| base.with_eps(e)).collect::<core::result::Result<_, _>>()?;
    hartree_core::solver::check_ladder(&specs)?;
    let outcomes: Vec<(f64, Option<hartree_core::solver::LifespanRecord>)> = specs
        .par_iter()
        .enumerate()
        .map(|(k, spec)| {
            let rec = lifespan_run(spec, &sweep_config(spec.eps(), cfg))?;
            on_record(k, spec.eps(), &rec)?;
            Ok((spec.eps(), rec))
        })
        .collect::<Result<_>>()?;
    let report = summarize_sweep(base, outcomes)?;
    let mut failures = Vec::new();
    for e in &report.excluded {
        failures.push(format!("sweep eps={e}: no blow-up before t_max"));
    }
    if !report.monotone() {
        failures.push("sweep: t_blow_mid is not nonincreasing in eps".into());
    }
    match report.fit {
        Some(fit) if fit.slope <= cfg.slope_bound => {}
        Some(fit) => failures.push(format!("sweep: fitted slope {} > {}", fit.slope, cfg.slope_bound)),
        None => failures.push("sweep: fewer than two blow-up times, no fit".into()),
    }
    let mut refinements = Vec::new();
    if let (Some(lo), Some(hi)) = (
        ladder.iter().copied().reduce(f64::min),
        ladder.iter().copied().reduce(f64::max),
    ) {
        for eps in [lo, hi] {
            let coarse = report.records.iter().find(|r| r.eps == eps).cloned();
            let Some(coarse) = coarse else { continue };
            let spec = base.with_eps(eps)?;
            let fine = lifespan_run(&spec, &sweep_config(eps, cfg).refined())?;
            match fine {
                Some(fine) => {
                    let r = confirm_refinement(coarse, fine);
                    if !(r.shrink >= cfg.min_shrink) {
                        failures.push(format!("sweep eps={eps}: bracket shrank by {} < {}", r.shrink, cfg.min_shrink));
                    }
                    refinements.push(r);
                }
                None => failures.push(format!("sweep eps={eps}: no blow-up on the refined grid")),
            }
        }
    }
    Ok(SweepOutcome {
        report,
        refinements,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_evaluation() {
        assert_eq!(polynomial(&[1.0, 2.0, 3.0], 2.0), 1.0 + 4.0 + 12.0);
        assert_eq!(polynomial(&[], 2.0), 0.0);
    }

    #[test]
    fn random_tuples_are_admissible_and_reproducible() {
        let a = random_tuples(50, 3);
        assert_eq!(a, random_tuples(50, 3));
        for (n, g, nu) in a {
            assert!((1..=7).contains(&n));
            assert!(g > 0.0 && g < n as f64);
            assert!(nu > 0.0);
        }
    }

    #[test]
    fn small_identity_suite_passes() {
        let cfg = IdentityDefaults {
            dimensions: vec![2, 5],
            cases_per_dimension: 4,
            max_degree: 4,
            rel_tol: 1e-6,
        };
        let (cases, failures) = identity_suite(&cfg, 11).unwrap();
        assert_eq!(cases.len(), 8);
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn sweep_config_scales_with_eps() {
        let d = crate::defaults::Defaults::builtin().sweep;
        let c = sweep_config(0.1, &d);
        assert!((c.t_max - d.t_max_scale * 100.0).abs() < 1e-9);
        assert_eq!(c.probe, Some(Probe::Off));
        let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.1).unwrap();
        c.validate(&spec).unwrap();
    }
}
