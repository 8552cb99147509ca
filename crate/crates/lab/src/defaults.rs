//! The versioned defaults file, compiled in and echoed into manifests.

use serde::{Deserialize, Serialize};

pub const DEFAULTS_TOML: &str = include_str!("defaults.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub version: u32,
    pub identity: IdentityDefaults,
    pub kernel: KernelDefaults,
    pub sequences: SequenceDefaults,
    pub simulate: SimulateDefaults,
    pub sweep: SweepDefaults,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityDefaults {
    pub dimensions: Vec<u32>,
    pub cases_per_dimension: usize,
    pub max_degree: u32,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDefaults {
    pub dimensions: Vec<u32>,
    pub adaptive_rel_tol: f64,
    pub monte_carlo_rel_tol: f64,
    pub monte_carlo_sigmas: f64,
    pub newton_rel_tol: f64,
    pub newton_radii: Vec<f64>,
    pub panel: f64,
    pub panel_points: usize,
    pub samples: usize,
    pub strata: usize,
    pub angular_strata: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDefaults {
    pub jmax: u32,
    pub random_tuples: usize,
    pub bound_jmax: u32,
    pub slack_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateDefaults {
    pub dr: f64,
    pub r_max: f64,
    pub t_max: f64,
    pub positivity_tol: f64,
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDefaults {
    pub eps_max: f64,
    pub eps_min: f64,
    pub points: usize,
    pub dr: f64,
    pub t_max_scale: f64,
    pub r_max_factor: f64,
    pub slope_bound: f64,
    pub min_shrink: f64,
}

impl SweepDefaults {
    /// `points` log-spaced values from `eps_max` down to `eps_min`.
    pub fn ladder(&self) -> Vec<f64> {
        log_ladder(self.eps_max, self.eps_min, self.points)
    }
}

pub fn log_ladder(hi: f64, lo: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![hi];
    }
    let ratio = (lo / hi).ln() / (points - 1) as f64;
    (0..points).map(|k| hi * (ratio * k as f64).exp()).collect()
}

impl Defaults {
    pub fn builtin() -> Self {
        toml::from_str(DEFAULTS_TOML).expect("the bundled defaults file parses")
    }
}
