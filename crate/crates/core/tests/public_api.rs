use std::sync::Arc;

use hartree_core::exponents::{critical_decay, strauss_exponent, ProblemSpec};
use hartree_core::iteration::sequence_report;
use hartree_core::radial_kernel::{build_kernel_matrix, ConvolutionOperator, NewtonPotential, RadialGrid};
use hartree_core::solver::{run, Probe, RunStatus, SolverConfig};
use hartree_core::wave_rep::{FieldMeta, RadialField};

#[test]
fn reference_problem_is_supercritical() {
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.01).unwrap();
    assert_eq!(critical_decay(3, 1.0, 2.0).unwrap(), 1.0);
    assert_eq!(spec.supercritical_gap(), 1.0);
    assert!(spec.require_supercritical().is_ok());
    let p0 = strauss_exponent(3).finite().unwrap();
    assert!((p0 - (1.0 + 2f64.sqrt())).abs() < 1e-12);
}

#[test]
fn sequence_table_matches_closed_forms() {
    let spec = ProblemSpec::blowup(3, 1.0, 0.5, 8.0, 1.0).unwrap();
    let rows = sequence_report(&spec, 25).unwrap();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.closed_form_matches));
    assert!(rows.iter().all(|r| r.log_bound <= r.log_c_j + 1e-12));
}

#[test]
fn newton_operator_agrees_with_the_dense_kernel() {
    let grid = Arc::new(RadialGrid::uniform(1.0 / 16.0, 4.0, 1).unwrap());
    let dense = build_kernel_matrix(grid.clone(), 3, 1.0).unwrap();
    let fast = NewtonPotential::new(grid.clone()).unwrap();
    let u = RadialField::from_fn(grid, 0.0, FieldMeta::default(), |r| (-r * r).exp()).unwrap();
    let mut a = vec![0.0; u.values().len()];
    let mut b = a.clone();
    dense.apply(u.values(), &mut a);
    fast.apply(u.values(), &mut b);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-9 * y.abs(), "{x} vs {y}");
    }
}

#[test]
fn large_data_blows_up_and_small_data_does_not_within_a_short_window() {
    let config = SolverConfig {
        dr: 1.0 / 16.0,
        r_max: 40.0,
        t_max: 30.0,
        probe: Some(Probe::Off),
        snapshot_every: 1000,
        ..SolverConfig::default()
    };
    let big = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 1.0).unwrap();
    let out = run(&big, &config).unwrap();
    let rec = out.status.record().expect("blow-up");
    assert!(rec.t_blow_lo < rec.t_blow_hi && rec.t_blow_hi <= config.t_max);

    let small = big.with_eps(1e-4).unwrap();
    let out = run(&small, &SolverConfig { t_max: 5.0, ..config }).unwrap();
    assert!(matches!(out.status, RunStatus::Completed { .. }));
}
