use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hartree_lab::artifacts::{sha256_file, Manifest};
use hartree_lab::snapshot::read_snapshot;

fn lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hartree-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("RUST_LOG", "warn")
        .env("HARTREE_LAB_WORKERS", "1")
        .output()
        .expect("binary runs")
}

/// The single `<out>/<kind>/<stamp>` directory of a run.
fn run_dir(out: &Path, kind: &str) -> PathBuf {
    let mut dirs: Vec<PathBuf> = fs::read_dir(out.join(kind))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    dirs.sort();
    dirs.pop().expect("a run directory")
}

fn manifest(dir: &Path) -> Manifest {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn exponents_prints_a_json_object() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&["exponents", "--n", "3", "--gamma", "1", "--mu", "2"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nu_c"], 1.0);
    assert_eq!(v["fujita_exponent"], 1.0 + 2.0 / 3.0);
    let p0 = v["strauss_exponent"].as_f64().unwrap();
    assert!((p0 - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    let dir = run_dir(tmp.path(), "exponents-report");
    assert!(dir.join("results.json").exists());
    assert!(manifest(&dir).passed);
}

#[test]
fn verify_sequences_writes_a_table_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["verify-sequences", "--n", "3", "--gamma", "1", "--nu", "0.5", "--jmax", "40"];
    let first = lab(&args, &tmp.path().join("a"));
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = lab(&args, &tmp.path().join("b"));
    assert_eq!(second.status.code(), Some(0));
    let a = run_dir(&tmp.path().join("a"), "verify-sequences");
    let b = run_dir(&tmp.path().join("b"), "verify-sequences");
    let table = fs::read_to_string(a.join("results.csv")).unwrap();
    assert_eq!(table.lines().count(), 41);
    assert!(table.starts_with("j,a_j,b_j,d_j,log_c_j,log_bound,closed_form_matches\r\n"));
    let m = manifest(&a);
    assert!(m.passed && m.failures.is_empty());
    assert_eq!(m.plan.jmax, Some(40));
    assert!(m.defaults.contains("[sequences]"));
    for f in &m.files {
        assert_eq!(sha256_file(&a.join(&f.path)).unwrap(), f.sha256);
        assert_eq!(sha256_file(&b.join(&f.path)).unwrap(), f.sha256, "{} differs", f.path.display());
    }
}

#[test]
fn verify_identity_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&["verify-identity", "--seed", "7"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = run_dir(tmp.path(), "verify-identity");
    assert_eq!(header(&dir.join("results.csv")), "n,r,rho,degree,john,oracle,rel_err");
    assert_eq!(manifest(&dir).seed, 7);
}

#[test]
fn simulate_writes_status_positivity_and_snapshot() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&["simulate", "--dr", "0.0625", "--r-max", "8", "--t-max", "1"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = run_dir(tmp.path(), "simulate");
    for f in ["results.csv", "status.json", "positivity.json", "trajectory.hwsnap", "manifest.json"] {
        assert!(dir.join(f).exists(), "{f} missing");
    }
    let (head, field) = read_snapshot(&dir.join("trajectory.hwsnap")).unwrap();
    assert_eq!(head.dr, 0.0625);
    assert_eq!(field.levels().len(), head.levels);
    assert!(field.t_end() <= 1.0 + 1e-12);
}

#[test]
fn lifespan_sweep_writes_the_bracket_table() {
    // a short, pre-asymptotic ladder: every run triggers, but the two-point
    // slope (about -1.65) misses the -1.7 bound, so the command exits 1
    let tmp = tempfile::tempdir().unwrap();
    let plan = tmp.path().join("plan.json");
    fs::write(&plan, r#"{"kind": "lifespan-sweep", "eps": [0.05, 0.04], "config": {"dr": 0.25}}"#).unwrap();
    let out = lab(&["lifespan-sweep", "--plan", plan.to_str().unwrap()], tmp.path());
    let dir = run_dir(tmp.path(), "lifespan-sweep");
    assert_eq!(header(&dir.join("results.csv")), "eps,t_lo,t_hi,t_mid,refined");
    let fit: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("fit.json")).unwrap()).unwrap();
    assert_eq!(fit["theoretical_exponent"], -2.0);
    let m = manifest(&dir);
    assert!(m.files.iter().any(|f| f.path.starts_with("runs")));
    assert_eq!(fit["excluded"], serde_json::json!([]));
    assert_eq!(out.status.code(), Some(1));
    assert!(!m.passed);
    assert_eq!(m.failures.len(), 1);
    assert!(m.failures[0].contains("slope"), "{:?}", m.failures);
}

#[test]
fn configuration_errors_exit_two_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lab(&["exponents", "--bogus", "1"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));

    let plan = tmp.path().join("plan.json");
    fs::write(&plan, r#"{"spec": {"n": 3, "gama": 1.0}}"#).unwrap();
    let out = lab(&["simulate", "--plan", plan.to_str().unwrap()], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gama"));

    let out = lab(&["simulate", "--gamma", "4"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));

    let out = Command::new(env!("CARGO_BIN_EXE_hartree-lab"))
        .args(["exponents", "--out"])
        .arg(tmp.path())
        .env("HARTREE_LAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
