use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;

use super::*;
use crate::exponents::ProblemSpec;
use crate::radial_kernel::{build_kernel_matrix, ConvolutionOperator, NewtonPotential, RadialGrid};
use crate::wave_rep::{FieldMeta, RadialField, RepresentationSettings, SpaceTimeField};

fn grid(dr: f64, r_max: f64) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::uniform(dr, r_max, 1).unwrap())
}

/// `C^4` bump supported in `|s - c| < w`.
fn bump(s: f64, c: f64, w: f64) -> f64 {
    let x = (s - c) / w;
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - x * x).powi(5)
    }
}

fn bump_prime(s: f64, c: f64, w: f64) -> f64 {
    let x = (s - c) / w;
    if x.abs() >= 1.0 {
        0.0
    } else {
        -10.0 * x * (1.0 - x * x).powi(4) / w
    }
}

fn march(
    g: &Arc<RadialGrid>,
    n: u32,
    op: Option<&dyn ConvolutionOperator>,
    form: Formulation,
    dt: f64,
    pos: &[f64],
    vel: &[f64],
    t_end: f64,
) -> Vec<f64> {
    let mut s = Solver::new(g.clone(), n, form, op, dt, pos, vel, Box::new(|_| 0.0)).unwrap();
    let steps = (t_end / dt).round() as usize;
    while s.steps() < steps {
        s.advance();
    }
    s.current().to_vec()
}

#[test]
fn zero_data_stays_zero() {
    let g = grid(0.05, 5.0);
    let op = NewtonPotential::new(g.clone()).unwrap();
    let zeros = vec![0.0; g.len()];
    let out = march(&g, 3, Some(&op), Formulation::Undamped, 0.025, &zeros, &zeros, 2.0);
    assert!(out.iter().all(|v| v.to_bits() == 0));
}

#[test]
fn outgoing_pulse_in_three_dimensions() {
    // u = phi(r - t) / r with phi supported in (4, 6)
    let t_end = 2.0;
    let mut errors = Vec::new();
    for &dr in &[1.0 / 16.0, 1.0 / 32.0] {
        let g = grid(dr, 12.0);
        let pos: Vec<f64> = g.nodes().iter().map(|&r| if r > 0.0 { bump(r, 5.0, 1.0) / r } else { 0.0 }).collect();
        let vel: Vec<f64> = g
            .nodes()
            .iter()
            .map(|&r| if r > 0.0 { -bump_prime(r, 5.0, 1.0) / r } else { 0.0 })
            .collect();
        let out = march(&g, 3, None, Formulation::Undamped, 0.5 * dr, &pos, &vel, t_end);
        let err = g
            .nodes()
            .iter()
            .zip(&out)
            .filter(|(&r, _)| r > 0.0)
            .map(|(&r, &u)| (u - bump(r - t_end, 5.0, 1.0) / r).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors[1] < 2e-3, "error {errors:?}");
    assert!((errors[0] / errors[1]).log2() > 1.8, "errors {errors:?}");
}

/// Leapfrog at `cfl < 1` has a dispersive precursor a few cells ahead of
/// the physical front. Its values are exactly zero outside the numerical
/// domain of dependence (one cell per step) and fall below `1e-12` within
/// `16 dr` of the physical front, and the leak past `2 dr` shrinks under
/// refinement.
#[test]
fn finite_propagation_speed() {
    let r0 = 2.0;
    let t = 3.0;
    for n in [1, 2, 3, 5] {
        let mut leaks = Vec::new();
        for dr in [1.0 / 32.0, 1.0 / 64.0] {
            let g = grid(dr, 10.0);
            let vel: Vec<f64> = g.nodes().iter().map(|&r| bump(r, 1.0, 1.0)).collect();
            let pos = vec![0.0; g.len()];
            let dt = 0.5 * dr;
            let out = march(&g, n, None, Formulation::Undamped, dt, &pos, &vel, t);
            let steps = (t / dt).round();
            let mut leak: f64 = 0.0;
            for (&r, &u) in g.nodes().iter().zip(&out) {
                if r > r0 + (steps + 1.0) * dr {
                    assert_eq!(u.to_bits(), 0, "n = {n}: u({r}) = {u} outside the numerical cone");
                }
                if r > r0 + t + 16.0 * dr {
                    assert!(u.abs() < 1e-12, "n = {n}: u({r}) = {u}");
                }
                if r > r0 + t + 2.0 * dr {
                    leak = leak.max(u.abs());
                }
            }
            leaks.push(leak);
        }
        assert!(leaks[1] < 0.25 * leaks[0], "n = {n}: leaks {leaks:?}");
    }
}

#[test]
fn linear_self_convergence() {
    for n in [2, 3, 5] {
        let t_end = 1.0;
        let sols: Vec<Vec<f64>> = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]
            .iter()
            .map(|&dr| {
                let g = grid(dr, 6.0);
                let vel: Vec<f64> = g.nodes().iter().map(|&r| (-r * r).exp()).collect();
                let pos = vec![0.0; g.len()];
                march(&g, n, None, Formulation::Undamped, 0.5 * dr, &pos, &vel, t_end)
            })
            .collect();
        let p = observed_order(&sols[0], &sols[1], &sols[2]).unwrap();
        assert!(p >= 1.8, "n = {n}: order {p}");
    }
}

#[test]
fn cfl_and_domain_checks() {
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.01).unwrap();
    let bad = SolverConfig {
        cfl: 0.95,
        ..SolverConfig::default()
    };
    assert!(matches!(bad.validate(&spec), Err(crate::Error::Config(_))));
    let short = SolverConfig {
        r_max: 5.0,
        t_max: 2.0,
        ..SolverConfig::default()
    };
    // default probe r = 6 t needs r_max >= 14
    assert!(matches!(short.validate(&spec), Err(crate::Error::Config(_))));
    let ok = SolverConfig {
        r_max: 14.0,
        t_max: 2.0,
        ..SolverConfig::default()
    };
    ok.validate(&spec).unwrap();
    assert_eq!(ok.time_step(), 1.0 / 64.0);
    let explicit = SolverConfig {
        dt: Some(0.1),
        ..ok
    };
    assert!(explicit.validate(&spec).is_err());
}

#[test]
fn step_matches_solver() {
    let spec = ProblemSpec::blowup(2, 1.0, 0.25, 1.0, 0.5).unwrap();
    let config = SolverConfig {
        dr: 0.125,
        r_max: 8.0,
        t_max: 0.5,
        probe: Some(Probe::Off),
        ..SolverConfig::default()
    };
    let g = solver_grid(&config).unwrap();
    let k = build_kernel_matrix(g.clone(), 2, 1.0).unwrap();
    let out = run_with(&spec, &config, &k, InitialData::SlowDecay, Formulation::Undamped).unwrap();
    let levels = out.trajectory.levels();
    let dt = config.time_step();
    let meta = FieldMeta::default();
    let a = RadialField::new(g.clone(), levels[1].clone(), dt, meta).unwrap();
    let b = RadialField::new(g.clone(), levels[2].clone(), 2.0 * dt, meta).unwrap();
    let c = step(&a, &b, &k, &spec, &config).unwrap();
    for (x, y) in c.values().iter().zip(&levels[3]) {
        assert!((x - y).abs() <= 1e-14 * x.abs().max(1e-300), "{x} vs {y}");
    }
}

#[test]
fn damped_and_undamped_agree() {
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.5).unwrap();
    let config = SolverConfig {
        dr: 1.0 / 32.0,
        r_max: 16.0,
        t_max: 2.0,
        ..SolverConfig::default()
    };
    let g = solver_grid(&config).unwrap();
    let op = NewtonPotential::new(g).unwrap();
    let u = run_with(&spec, &config, &op, InitialData::SlowDecay, Formulation::Undamped).unwrap();
    let v = run_with(&spec, &config, &op, InitialData::SlowDecay, Formulation::Damped).unwrap();
    let mut worst: f64 = 0.0;
    for (k, (lu, lv)) in u.trajectory.levels().iter().zip(v.trajectory.levels()).enumerate() {
        let t = u.trajectory.level_time(k);
        let scale = lu.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            continue;
        }
        let diff = lu.iter().zip(lv).fold(0.0f64, |m, (a, b)| m.max((a - (1.0 + t) * b).abs()));
        worst = worst.max(diff / scale);
    }
    assert!(worst < 1e-3, "max relative difference {worst}");
}

#[test]
fn blowup_is_bracketed_and_monotone() {
    let config = SolverConfig {
        dr: 1.0 / 16.0,
        r_max: 120.0,
        t_max: 60.0,
        probe: Some(Probe::Off),
        snapshot_every: 1000,
        ..SolverConfig::default()
    };
    let g = solver_grid(&config).unwrap();
    let op = NewtonPotential::new(g).unwrap();
    let mut mids = Vec::new();
    for eps in [0.2, 0.4, 0.8, 1.6] {
        let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, eps).unwrap();
        let out = run_with(&spec, &config, &op, InitialData::SlowDecay, Formulation::Undamped).unwrap();
        let rec = out.status.record().expect("blow-up").clone();
        assert!(rec.t_blow_lo < rec.t_blow_hi);
        assert!((rec.width() - config.time_step()).abs() < 1e-12);
        mids.push(rec.t_mid());
    }
    assert!(mids.windows(2).all(|w| w[1] <= w[0]), "{mids:?}");
    // tiny data does not trigger within a short window
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 1e-4).unwrap();
    let short = SolverConfig { t_max: 5.0, ..config };
    let out = run_with(&spec, &short, &op, InitialData::SlowDecay, Formulation::Undamped).unwrap();
    assert!(matches!(out.status, RunStatus::Completed { .. }));
}

#[test]
fn positivity_on_the_wedge() {
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.01).unwrap();
    let config = SolverConfig {
        dr: 1.0 / 16.0,
        r_max: 14.0,
        t_max: 2.0,
        snapshot_every: 4,
        ..SolverConfig::default()
    };
    let out = run(&spec, &config).unwrap();
    let report = positivity_monitor(&out.trajectory, &spec, DEFAULT_POSITIVITY_TOLERANCE);
    assert!(report.passed(), "{:?}", report.violations.first());
    assert!(report.min_ratio > 1.0);
    // corrupting one wedge value is detected
    let mut levels = out.trajectory.levels().to_vec();
    let k = levels.len() - 1;
    let t = out.trajectory.level_time(k);
    let i = ((10.0_f64.max(1.0 + 3.0 * t)) / config.dr) as usize;
    levels[k][i] = -1e-9;
    let bad = SpaceTimeField::from_levels(out.trajectory.grid().clone(), 0.0, out.trajectory.dt(), levels).unwrap();
    let report = positivity_monitor(&bad, &spec, DEFAULT_POSITIVITY_TOLERANCE);
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].kind, ViolationKind::NonPositive);
}

#[test]
fn sign_change_inside_r_is_invisible_on_the_wedge() {
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.01).unwrap();
    let config = SolverConfig {
        dr: 1.0 / 16.0,
        r_max: 14.0,
        t_max: 2.0,
        snapshot_every: 4,
        ..SolverConfig::default()
    };
    let g = solver_grid(&config).unwrap();
    let op = NewtonPotential::new(g).unwrap();
    let data = InitialData::SignChange { radius: 1.0, depth: 3.0 };
    let out = run_with(&spec, &config, &op, data, Formulation::Undamped).unwrap();
    let negative = out.trajectory.levels().iter().flatten().any(|&u| u < 0.0);
    assert!(negative, "the data should produce negative values somewhere");
    let report = positivity_monitor(&out.trajectory, &spec, DEFAULT_POSITIVITY_TOLERANCE);
    assert!(report.violations.iter().all(|v| v.kind != ViolationKind::NonPositive));
}

#[test]
fn picard_first_iterate_is_free_solution() {
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.01).unwrap();
    let g = grid(0.125, 3.0);
    let op = NewtonPotential::new(g.clone()).unwrap();
    let zero = SpaceTimeField::from_levels(g.clone(), 0.0, 0.05, vec![vec![0.0; g.len()]; 3]).unwrap();
    let first = picard_iterate(&zero, &spec, &op, RepresentationSettings::default(), 3).unwrap();
    let picard = Picard::new(&spec, &op, InitialData::SlowDecay, 0.05, 3, RepresentationSettings::default()).unwrap();
    assert_eq!(first, picard.free_part().unwrap());
    let (_, report) = picard_sequence(&picard, 3).unwrap();
    assert!(report.contracting(), "{report:?}");
}

#[test]
fn power_law_fit_recovers_exponent() {
    let eps = [0.1, 0.05, 0.025];
    let t: Vec<f64> = eps.iter().map(|e| 3.0 * e.powf(-2.0)).collect();
    let fit = fit_power_law(&eps, &t).unwrap();
    assert!((fit.slope + 2.0).abs() < 1e-12);
    assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-12);
    let base = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.1).unwrap();
    let specs: Vec<_> = eps.iter().map(|&e| base.with_eps(e).unwrap()).collect();
    assert_eq!(check_ladder(&specs).unwrap(), vec![0.025, 0.05, 0.1]);
    let uneven = [base, base.with_eps(0.2).unwrap(), base.with_eps(0.3).unwrap()];
    assert!(check_ladder(&uneven).is_err());
    let mixed = [base, ProblemSpec::blowup(3, 1.0, 0.4, 1.0, 0.2).unwrap()];
    assert!(check_ladder(&mixed).is_err());
}

#[test]
fn theoretical_exponents() {
    let s3 = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.1).unwrap();
    let r = summarize_sweep(&s3, Vec::new()).unwrap();
    assert_eq!(r.theoretical_exponent, -2.0);
    let s1 = ProblemSpec::blowup(1, 0.5, 0.1, 1.0, 0.1).unwrap();
    let r = summarize_sweep(&s1, vec![(0.1, None)]).unwrap();
    assert!((r.theoretical_exponent + 20.0 / 3.0).abs() < 1e-12);
    assert_eq!(r.excluded, vec![0.1]);
    assert!(r.fit.is_none());
}
