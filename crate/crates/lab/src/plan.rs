//! Experiment plans: a JSON file, overridden by command-line flags, resolved
//! against per-kind defaults into a validated [`ExperimentPlan`].

use std::fmt;
use std::path::{Path, PathBuf};

use hartree_core::exponents::ProblemSpec;
use hartree_core::solver::SolverConfig;
use serde::{Deserialize, Serialize};

use crate::defaults::Defaults;
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanKind {
    VerifyIdentity,
    VerifyKernel,
    VerifySequences,
    Simulate,
    LifespanSweep,
    ExponentsReport,
}

impl PlanKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlanKind::VerifyIdentity => "verify-identity",
            PlanKind::VerifyKernel => "verify-kernel",
            PlanKind::VerifySequences => "verify-sequences",
            PlanKind::Simulate => "simulate",
            PlanKind::LifespanSweep => "lifespan-sweep",
            PlanKind::ExponentsReport => "exponents-report",
        }
    }

    /// Verification kinds exit 1 when a tolerance is exceeded.
    pub fn is_verification(self) -> bool {
        !matches!(self, PlanKind::ExponentsReport)
    }
}

impl fmt::Display for PlanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fully resolved plan; this is what the manifest records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub kind: PlanKind,
    pub spec: ProblemSpec,
    pub config: SolverConfig,
    /// Seed of the stochastic oracles and random test cases.
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Sequence length for `verify-sequences`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jmax: Option<u32>,
    /// Explicit `eps` ladder for `lifespan-sweep`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
}

/// The problem parameters as they may appear, partially, in a plan file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFields {
    pub n: Option<u32>,
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub a: Option<f64>,
    pub r: Option<f64>,
    pub eps: Option<f64>,
}

/// Plan file contents; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub kind: Option<PlanKind>,
    #[serde(default)]
    pub spec: SpecFields,
    pub config: Option<SolverConfig>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub jmax: Option<u32>,
    pub eps: Option<Vec<f64>>,
}

impl PlanFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(LabError::io(path))?;
        Self::parse(&text).map_err(|e| match e {
            LabError::Config(msg) => LabError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Config(format!("malformed plan: {e}")))
    }
}

/// Command-line overrides; `None` keeps the plan (or default) value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<u32>,
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub eps: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jmax: Option<u32>,
    pub dr: Option<f64>,
    pub r_max: Option<f64>,
    pub t_max: Option<f64>,
}

/// Default problem: `n = 3`, `gamma = 1`, `mu = 2`, `nu = 1/2`, `A = R = 1`,
/// `eps = 1e-2`.
fn default_spec_fields() -> SpecFields {
    SpecFields {
        n: Some(3),
        gamma: Some(1.0),
        mu: Some(2.0),
        nu: Some(0.5),
        a: Some(1.0),
        r: Some(1.0),
        eps: Some(0.01),
    }
}

fn default_config(kind: PlanKind, defaults: &Defaults) -> SolverConfig {
    match kind {
        PlanKind::LifespanSweep => SolverConfig {
            dr: defaults.sweep.dr,
            ..SolverConfig::default()
        },
        _ => SolverConfig {
            dr: defaults.simulate.dr,
            r_max: defaults.simulate.r_max,
            t_max: defaults.simulate.t_max,
            snapshot_every: defaults.simulate.snapshot_every,
            ..SolverConfig::default()
        },
    }
}

impl ExperimentPlan {
    /// Merges defaults < plan file < flags and validates the result.
    pub fn resolve(
        kind: PlanKind,
        file: Option<PlanFile>,
        overrides: &Overrides,
        defaults: &Defaults,
    ) -> Result<Self> {
        let file = file.unwrap_or_default();
        if let Some(k) = file.kind {
            if k != kind {
                return Err(LabError::Config(format!(
                    "field `kind`: plan is for `{k}` but the subcommand is `{kind}`"
                )));
            }
        }
        let d = default_spec_fields();
        let s = &file.spec;
        let pick = |o: Option<f64>, p: Option<f64>, d: Option<f64>| o.or(p).or(d).unwrap();
        let n = overrides.n.or(s.n).or(d.n).unwrap();
        let spec = ProblemSpec::new(
            n,
            pick(overrides.gamma, s.gamma, d.gamma),
            pick(overrides.mu, s.mu, d.mu),
            pick(overrides.nu, s.nu, d.nu),
            pick(None, s.a, d.a),
            pick(None, s.r, d.r),
            pick(overrides.eps, s.eps, d.eps),
        )
        .map_err(|e| LabError::Config(format!("field `spec`: {e}")))?;
        let mut config = file.config.unwrap_or_else(|| default_config(kind, defaults));
        if let Some(dr) = overrides.dr {
            config.dr = dr;
        }
        if let Some(r) = overrides.r_max {
            config.r_max = r;
        }
        if let Some(t) = overrides.t_max {
            config.t_max = t;
        }
        let plan = ExperimentPlan {
            kind,
            spec,
            config,
            seed: overrides.seed.or(file.seed).unwrap_or(0),
            output_dir: overrides
                .out
                .clone()
                .or(file.output_dir)
                .unwrap_or_else(|| PathBuf::from("out")),
            jmax: overrides.jmax.or(file.jmax),
            eps: file.eps,
        };
        plan.validate()?;
        Ok(plan)
    }

    fn validate(&self) -> Result<()> {
        if let Some(j) = self.jmax {
            if j == 0 {
                return Err(LabError::Config("field `jmax`: must be >= 1".into()));
            }
        }
        if let Some(eps) = &self.eps {
            if eps.len() < 2 || eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
                return Err(LabError::Config(
                    "field `eps`: need at least two positive values".into(),
                ));
            }
        }
        if self.kind == PlanKind::Simulate {
            self.config
                .validate(&self.spec)
                .map_err(|e| LabError::Config(format!("field `config`: {e}")))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_the_plan() {
        let file = PlanFile::parse(r#"{"spec": {"n": 2, "nu": 0.25}, "seed": 5}"#).unwrap();
        let o = Overrides {
            nu: Some(0.3),
            ..Overrides::default()
        };
        let plan = ExperimentPlan::resolve(PlanKind::VerifySequences, Some(file), &o, &Defaults::builtin()).unwrap();
        assert_eq!(plan.spec.n(), 2);
        assert_eq!(plan.spec.nu(), 0.3);
        assert_eq!(plan.seed, 5);
    }

    #[test]
    fn errors_name_the_field() {
        let e = PlanFile::parse(r#"{"spec": {"n": 3, "gama": 1}}"#).unwrap_err();
        assert!(e.to_string().contains("gama"), "{e}");
        assert_eq!(e.exit_code(), 2);
        let e = PlanFile::parse(r#"{"config": {"dx": 0.1}}"#).unwrap_err();
        assert!(e.to_string().contains("dx"), "{e}");
        let file = PlanFile::parse(r#"{"spec": {"gamma": 5.0}}"#).unwrap();
        let e = ExperimentPlan::resolve(PlanKind::Simulate, Some(file), &Overrides::default(), &Defaults::builtin())
            .unwrap_err();
        assert!(e.to_string().contains("gamma"), "{e}");
        let file = PlanFile::parse(r#"{"kind": "simulate"}"#).unwrap();
        let e = ExperimentPlan::resolve(PlanKind::LifespanSweep, Some(file), &Overrides::default(), &Defaults::builtin())
            .unwrap_err();
        assert!(e.to_string().contains("kind"), "{e}");
    }

    #[test]
    fn plan_round_trips_through_json() {
        let plan =
            ExperimentPlan::resolve(PlanKind::Simulate, None, &Overrides::default(), &Defaults::builtin()).unwrap();
        let text = serde_json::to_string(&plan).unwrap();
        let back: ExperimentPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(plan, back);
    }
}
