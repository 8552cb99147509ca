//! Executes a resolved [`ExperimentPlan`] and writes its artifacts under
//! `<output_dir>/<kind>/<timestamp>/`.

use std::fs;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use hartree_core::exponents::{critical_decay, fujita_exponent, strauss_exponent, ExtendedReal, ProblemSpec};
use hartree_core::iteration::sequence_report;
use hartree_core::solver::{positivity_monitor, run_with, solver_grid, Formulation, InitialData, LifespanRecord, RunStatus};
use log::info;
use serde::Serialize;
use serde_json::{json, Value};

use crate::artifacts::{timestamp, write_json, Manifest, RunDir};
use crate::checks;
use crate::defaults::{Defaults, SweepDefaults};
use crate::error::{LabError, Result};
use crate::kernels::{operator_for, KernelCache};
use crate::plan::{ExperimentPlan, PlanKind};
use crate::snapshot::write_snapshot;

/// What a finished plan reports back to the front end.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub passed: bool,
    pub failures: Vec<String>,
    /// Printed on stdout by the front end, when present.
    pub stdout: Option<String>,
}

/// Runs `plan`; `workers` is only recorded in the manifest (the caller owns
/// the thread pool).
pub fn execute(plan: &ExperimentPlan, defaults: &Defaults, workers: usize) -> Result<RunSummary> {
    let started_at = chrono::Utc::now().to_rfc3339();
    let clock = Instant::now();
    let mut dir = RunDir::create(&plan.output_dir, plan.kind, &timestamp())?;
    info!("{} -> {}", plan.kind, dir.path().display());
    let cache = KernelCache::new(plan.output_dir.join("kernel-cache"));
    let mut stdout = None;
    let failures = match plan.kind {
        PlanKind::VerifyIdentity => verify_identity(plan, defaults, &mut dir)?,
        PlanKind::VerifyKernel => verify_kernel(plan, defaults, &cache, &mut dir)?,
        PlanKind::VerifySequences => verify_sequences(plan, defaults, &mut dir)?,
        PlanKind::Simulate => simulate(plan, defaults, &cache, &mut dir)?,
        PlanKind::LifespanSweep => lifespan_sweep(plan, defaults, &mut dir)?,
        PlanKind::ExponentsReport => {
            let report = exponents_report(&plan.spec)?;
            dir.write_json("results.json", &report)?;
            stdout = Some(serde_json::to_string_pretty(&report)?);
            Vec::new()
        }
    };
    let passed = failures.is_empty();
    let manifest = Manifest::new(
        plan,
        defaults,
        workers,
        started_at,
        clock.elapsed().as_secs_f64(),
        passed,
        failures.clone(),
        &dir,
    )?;
    manifest.write(&dir)?;
    Ok(RunSummary {
        dir: dir.path().to_path_buf(),
        passed,
        failures,
        stdout,
    })
}

fn verify_identity(plan: &ExperimentPlan, defaults: &Defaults, dir: &mut RunDir) -> Result<Vec<String>> {
    let (cases, failures) = checks::identity_suite(&defaults.identity, plan.seed)?;
    dir.write_csv("results.csv", &cases)?;
    Ok(failures)
}

fn verify_kernel(
    plan: &ExperimentPlan,
    defaults: &Defaults,
    cache: &KernelCache,
    dir: &mut RunDir,
) -> Result<Vec<String>> {
    let (cases, failures) = checks::kernel_suite(&defaults.kernel, plan.seed, Some(cache))?;
    dir.write_csv("results.csv", &cases)?;
    Ok(failures)
}

fn verify_sequences(plan: &ExperimentPlan, defaults: &Defaults, dir: &mut RunDir) -> Result<Vec<String>> {
    let cfg = &defaults.sequences;
    let jmax = plan.jmax.unwrap_or(cfg.jmax);
    // the plan's own tuple first, then the random ones
    let mut tuples = vec![(plan.spec.n(), plan.spec.gamma(), plan.spec.nu())];
    tuples.extend(checks::random_tuples(cfg.random_tuples, plan.seed));
    let (exact, mut failures) = checks::exactness_suite(&tuples, jmax)?;
    dir.write_csv("exactness.csv", &exact)?;

    let (bound, bound_failures) = checks::induction_suite(&checks::induction_points(), cfg.bound_jmax, cfg.slack_tol)?;
    failures.extend(bound_failures);
    dir.write_csv("induction.csv", &bound)?;

    let table = sequence_report(&plan.spec, jmax)?;
    for row in table.iter().filter(|r| !r.closed_form_matches) {
        failures.push(format!("sequence table: closed form differs from the recurrence at j={}", row.j));
    }
    dir.write_csv("results.csv", &table)?;
    Ok(failures)
}

#[derive(Serialize)]
struct StatusRow {
    status: &'static str,
    eps: f64,
    t_end: f64,
    t_lo: Option<f64>,
    t_hi: Option<f64>,
    steps: usize,
    dt: f64,
    dr: f64,
    threshold: f64,
    max_field: f64,
}

fn simulate(
    plan: &ExperimentPlan,
    defaults: &Defaults,
    cache: &KernelCache,
    dir: &mut RunDir,
) -> Result<Vec<String>> {
    let spec = &plan.spec;
    let grid = solver_grid(&plan.config)?;
    let op = operator_for(grid, spec.n(), spec.gamma(), Some(cache))?;
    let out = run_with(spec, &plan.config, op.as_ref(), InitialData::SlowDecay, Formulation::Undamped)?;
    let d = out.status.diagnostics();
    let record = out.status.record();
    let row = StatusRow {
        status: match out.status {
            RunStatus::BlowUp(_) => "blow_up",
            RunStatus::Completed { .. } => "completed",
        },
        eps: spec.eps(),
        t_end: out.trajectory.t_end(),
        t_lo: record.map(|r| r.t_blow_lo),
        t_hi: record.map(|r| r.t_blow_hi),
        steps: d.steps,
        dt: d.dt,
        dr: d.dr,
        threshold: d.threshold,
        max_field: d.max_field,
    };
    dir.write_csv("results.csv", &[row])?;
    dir.write_json("status.json", &out.status)?;
    if !out.probe.is_empty() {
        dir.write_csv("probe.csv", &out.probe)?;
    }
    let report = positivity_monitor(&out.trajectory, spec, defaults.simulate.positivity_tol);
    dir.write_json("positivity.json", &report)?;
    let snap = dir.path().join("trajectory.hwsnap");
    write_snapshot(&snap, &out.trajectory, "u")?;
    dir.register("trajectory.hwsnap");

    let mut failures = Vec::new();
    if report.checked == 0 {
        failures.push("positivity: no stored grid point lies in the wedge".into());
    }
    for v in &report.violations {
        failures.push(format!(
            "positivity: {:?} at r={} t={} (u={}, bound={})",
            v.kind, v.r, v.t, v.u, v.bound
        ));
    }
    Ok(failures)
}

#[derive(Serialize)]
struct SweepRow {
    eps: f64,
    t_lo: f64,
    t_hi: f64,
    t_mid: f64,
    refined: bool,
}

fn sweep_settings(plan: &ExperimentPlan, defaults: &Defaults) -> SweepDefaults {
    SweepDefaults {
        dr: plan.config.dr,
        ..defaults.sweep.clone()
    }
}

fn lifespan_sweep(plan: &ExperimentPlan, defaults: &Defaults, dir: &mut RunDir) -> Result<Vec<String>> {
    let settings = sweep_settings(plan, defaults);
    let ladder = plan.eps.clone().unwrap_or_else(|| settings.ladder());
    let runs = dir.path().join("runs");
    fs::create_dir_all(&runs).map_err(LabError::io(&runs))?;
    // each worker writes its own file; the coordinator only collects names
    let written = Mutex::new(Vec::new());
    let on_record = |k: usize, eps: f64, rec: &Option<LifespanRecord>| -> Result<()> {
        let name = format!("runs/eps-{k:02}.json");
        write_json(&dir.path().join(&name), &json!({ "eps": eps, "record": rec }))?;
        written.lock().expect("worker panicked").push(name);
        Ok(())
    };
    let out = checks::lifespan_sweep(&plan.spec, &ladder, &settings, &on_record)?;
    let mut names = written.into_inner().expect("worker panicked");
    names.sort();
    for name in names {
        dir.register(name);
    }

    let mut records = out.report.records.clone();
    for r in &out.refinements {
        if let Some(rec) = records.iter_mut().find(|x| x.eps == r.coarse.eps) {
            rec.refined = r.coarse.refined;
        }
    }
    records.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let rows: Vec<SweepRow> = records
        .iter()
        .map(|r| SweepRow {
            eps: r.eps,
            t_lo: r.t_blow_lo,
            t_hi: r.t_blow_hi,
            t_mid: r.t_mid(),
            refined: r.refined,
        })
        .collect();
    dir.write_csv("results.csv", &rows)?;
    dir.write_json(
        "fit.json",
        &json!({
            "fit": out.report.fit,
            "theoretical_exponent": out.report.theoretical_exponent,
            "slope_bound": settings.slope_bound,
            "monotone": out.report.monotone(),
            "excluded": out.report.excluded,
            "refinements": out.refinements,
        }),
    )?;
    Ok(out.failures)
}

fn extended(x: ExtendedReal) -> Value {
    match x {
        ExtendedReal::Finite(v) => json!(v),
        ExtendedReal::Infinite => json!("inf"),
    }
}

/// Critical exponents of `spec`'s `(n, gamma, mu)`; an infinite Strauss
/// exponent is written as the string `"inf"`.
pub fn exponents_report(spec: &ProblemSpec) -> Result<Value> {
    let nu_c = critical_decay(spec.n(), spec.gamma(), spec.mu())?;
    let gap = spec.supercritical_gap();
    Ok(json!({
        "n": spec.n(),
        "gamma": spec.gamma(),
        "mu": spec.mu(),
        "nu_c": nu_c,
        "strauss_exponent": extended(strauss_exponent(spec.n())),
        "fujita_exponent": fujita_exponent(spec.n()),
        "nu": spec.nu(),
        "supercritical": gap > 0.0,
        "lifespan_exponent": if gap > 0.0 { json!(-2.0 / gap) } else { Value::Null },
    }))
}
