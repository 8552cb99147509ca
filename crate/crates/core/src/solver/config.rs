use alloc::format;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::ProblemSpec;
use crate::wave_rep::region_delta;

/// Ray `r(t) = offset + slope t` along which the solution is recorded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Probe {
    Ray { slope: f64, offset: f64 },
    Off,
}

impl Probe {
    /// `r = 2 (1 + delta) t` inside the wedge; `x = 2 (R + t)` for `n = 1`.
    pub fn default_for(spec: &ProblemSpec) -> Self {
        if spec.n() == 1 {
            Probe::Ray {
                slope: 2.0,
                offset: 2.0 * spec.inner_radius(),
            }
        } else {
            Probe::Ray {
                slope: 2.0 * (1.0 + region_delta(spec.n())),
                offset: 0.0,
            }
        }
    }

    pub fn radius(&self, t: f64) -> Option<f64> {
        match *self {
            Probe::Ray { slope, offset } => Some(offset + slope * t),
            Probe::Off => None,
        }
    }
}

/// Discretization and stopping parameters of a finite-difference run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub dr: f64,
    pub r_max: f64,
    /// Time step; `None` picks the largest step `<= cfl dr` that divides `t_max`.
    pub dt: Option<f64>,
    pub cfl: f64,
    /// Sup-norm trigger `M`; `None` means `10^3 eps A`.
    pub blowup_threshold: Option<f64>,
    /// Further sup-norm doublings past `M` before the run stops.
    pub doublings: u32,
    pub t_max: f64,
    pub probe: Option<Probe>,
    /// Store every `k`-th time level in the trajectory.
    pub snapshot_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dr: 1.0 / 32.0,
            r_max: 16.0,
            dt: None,
            cfl: 0.5,
            blowup_threshold: None,
            doublings: 10,
            t_max: 2.0,
            probe: None,
            snapshot_every: 1,
        }
    }
}

pub const MAX_CFL: f64 = 0.9;

fn config_error(msg: alloc::string::String) -> Error {
    Error::Config(msg)
}

impl SolverConfig {
    /// The step actually used.
    pub fn time_step(&self) -> f64 {
        match self.dt {
            Some(dt) => dt,
            None => {
                let target = self.cfl * self.dr;
                let steps = (self.t_max / target - 1e-9).ceil().max(1.0);
                self.t_max / steps
            }
        }
    }

    pub fn threshold(&self, spec: &ProblemSpec) -> f64 {
        self.blowup_threshold
            .unwrap_or(1e3 * spec.eps() * spec.amplitude())
    }

    pub fn probe_for(&self, spec: &ProblemSpec) -> Probe {
        self.probe.unwrap_or_else(|| Probe::default_for(spec))
    }

    /// Same configuration with `dr` and `dt` halved.
    pub fn refined(&self) -> Self {
        Self {
            dr: self.dr / 2.0,
            dt: self.dt.map(|dt| dt / 2.0),
            ..*self
        }
    }

    /// Checks positivity, the CFL condition and domain-of-dependence sizing.
    pub fn validate(&self, spec: &ProblemSpec) -> Result<()> {
        if !(self.dr.is_finite() && self.dr > 0.0) {
            return Err(config_error(format!("dr must be > 0, got {}", self.dr)));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(config_error(format!("t_max must be > 0, got {}", self.t_max)));
        }
        if !(self.cfl > 0.0 && self.cfl <= MAX_CFL) {
            return Err(config_error(format!(
                "cfl must lie in (0, {MAX_CFL}], got {}",
                self.cfl
            )));
        }
        let dt = self.time_step();
        if !(dt > 0.0) || dt > self.cfl * self.dr * (1.0 + 1e-12) {
            return Err(config_error(format!(
                "dt = {dt} violates dt <= cfl dr = {}",
                self.cfl * self.dr
            )));
        }
        if self.snapshot_every == 0 {
            return Err(config_error("snapshot_every must be >= 1".into()));
        }
        if let Some(m) = self.blowup_threshold {
            if !(m > 0.0) {
                return Err(config_error(format!("blowup_threshold must be > 0, got {m}")));
            }
        }
        if let Some(p) = self.probe_for(spec).radius(self.t_max) {
            if self.r_max < p + self.t_max {
                return Err(config_error(format!(
                    "r_max = {} is inside the domain of dependence of the probe: need r_max >= {} + {} = {}",
                    self.r_max,
                    p,
                    self.t_max,
                    p + self.t_max
                )));
            }
        } else if self.r_max < self.t_max + self.dr {
            return Err(config_error(format!(
                "r_max = {} must exceed t_max = {}",
                self.r_max, self.t_max
            )));
        }
        Ok(())
    }
}
