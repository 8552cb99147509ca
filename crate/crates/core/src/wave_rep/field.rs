use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::radial_kernel::RadialGrid;

/// Which unknown a field stores: the undamped `u` or the damped `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unknown {
    #[default]
    U,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub unknown: Unknown,
    pub mu: f64,
}

impl Default for FieldMeta {
    fn default() -> Self {
        Self {
            unknown: Unknown::U,
            mu: 2.0,
        }
    }
}

/// Radial profile `u(r_i)` at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    time: f64,
    meta: FieldMeta,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>, time: f64, meta: FieldMeta) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid("values", format!("non-finite value at node {i}")));
        }
        if !(time.is_finite() && time >= 0.0) {
            return Err(invalid("time", format!("must be finite and >= 0, got {time}")));
        }
        Ok(Self {
            grid,
            values,
            time,
            meta,
        })
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: Arc<RadialGrid>, time: f64, meta: FieldMeta, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values, time, meta)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn meta(&self) -> FieldMeta {
        self.meta
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Piecewise polynomial interpolant at `r` (zero beyond the cut-off).
    pub fn at(&self, r: f64) -> f64 {
        self.grid.interpolate(&self.values, r)
    }
}

/// A field sampled on one radial grid at uniformly spaced time levels
/// `t0 + k dt`. Levels are append-only.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: Arc<RadialGrid>,
    t0: f64,
    dt: f64,
    levels: Vec<Vec<f64>>,
}

impl SpaceTimeField {
    pub fn new(grid: Arc<RadialGrid>, t0: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("dt", format!("must be > 0, got {dt}")));
        }
        if !t0.is_finite() {
            return Err(invalid("t0", "must be finite"));
        }
        Ok(Self {
            grid,
            t0,
            dt,
            levels: Vec::new(),
        })
    }

    pub fn from_levels(
        grid: impl Into<Arc<RadialGrid>>,
        t0: f64,
        dt: f64,
        levels: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let mut field = Self::new(grid.into(), t0, dt)?;
        for level in levels {
            field.push_level(level)?;
        }
        Ok(field)
    }

    /// Samples `f(r, t)` at `count` levels.
    pub fn from_fn(
        grid: Arc<RadialGrid>,
        t0: f64,
        dt: f64,
        count: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let levels = (0..count)
            .map(|k| {
                let t = t0 + k as f64 * dt;
                grid.nodes().iter().map(|&r| f(r, t)).collect()
            })
            .collect();
        Self::from_levels(grid, t0, dt, levels)
    }

    pub fn push_level(&mut self, values: Vec<f64>) -> Result<()> {
        if values.len() != self.grid.len() {
            return Err(Error::GridMismatch(format!(
                "level of {} values for {} nodes",
                values.len(),
                self.grid.len()
            )));
        }
        self.levels.push(values);
        Ok(())
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn level_time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Time of the newest level.
    pub fn t_end(&self) -> f64 {
        self.level_time(self.levels.len().saturating_sub(1))
    }

    /// Linear interpolation in both `lambda` and `s`; zero beyond `r_max`,
    /// clamped to the first/last level outside the stored time range.
    pub fn sample(&self, lambda: f64, s: f64) -> f64 {
        if self.levels.is_empty() {
            return 0.0;
        }
        let x = ((s - self.t0) / self.dt).max(0.0);
        let last = self.levels.len() - 1;
        let k = (x.floor() as usize).min(last);
        if k == last {
            return self.grid.interpolate_linear(&self.levels[last], lambda);
        }
        let w = x - k as f64;
        let a = self.grid.interpolate_linear(&self.levels[k], lambda);
        if w == 0.0 {
            return a;
        }
        let b = self.grid.interpolate_linear(&self.levels[k + 1], lambda);
        a * (1.0 - w) + b * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_fields() {
        let grid = Arc::new(RadialGrid::uniform(0.5, 2.0, 1).unwrap());
        assert!(RadialField::new(grid.clone(), vec![0.0; 3], 0.0, FieldMeta::default()).is_err());
        assert!(RadialField::new(grid.clone(), vec![f64::NAN; 5], 0.0, FieldMeta::default()).is_err());
        assert!(RadialField::new(grid, vec![1.0; 5], -1.0, FieldMeta::default()).is_err());
    }

    #[test]
    fn bilinear_sampling_is_exact_for_bilinear_data() {
        let grid = Arc::new(RadialGrid::uniform(0.25, 3.0, 1).unwrap());
        let f = SpaceTimeField::from_fn(grid, 0.0, 0.1, 11, |r, t| 1.0 + 2.0 * r + 3.0 * t + r * t).unwrap();
        for &(r, s) in &[(0.1, 0.05), (1.3, 0.77), (2.9, 1.0)] {
            let expect = 1.0 + 2.0 * r + 3.0 * s + r * s;
            assert!((f.sample(r, s) - expect).abs() < 1e-12, "({r}, {s})");
        }
        assert_eq!(f.sample(3.5, 0.5), 0.0);
        assert!((f.t_end() - 1.0).abs() < 1e-15);
    }
}
