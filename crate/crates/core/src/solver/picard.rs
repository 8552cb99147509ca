//! Fixed-point iteration of the integral equation
//! `u = eps u^0 + L((V * u^2) u)` on a short horizon, used to cross-check
//! the finite-difference scheme.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::scheme::InitialData;
use crate::error::{invalid, Error, Result};
use crate::exponents::ProblemSpec;
use crate::radial_kernel::{ConvolutionOperator, RadialGrid};
use crate::wave_rep::{Representation, RepresentationSettings, SpaceTimeField};

/// Iteration map with the free part cached.
pub struct Picard<'a> {
    spec: ProblemSpec,
    kernel: &'a dyn ConvolutionOperator,
    rep: Representation,
    dt: f64,
    levels: usize,
    free: Vec<Vec<f64>>,
}

impl<'a> Picard<'a> {
    /// Output levels are `k dt`, `k < levels`, on the kernel's grid.
    pub fn new(
        spec: &ProblemSpec,
        kernel: &'a dyn ConvolutionOperator,
        data: InitialData,
        dt: f64,
        levels: usize,
        settings: RepresentationSettings,
    ) -> Result<Self> {
        if kernel.n() != spec.n() || kernel.gamma() != spec.gamma() {
            return Err(invalid("kernel", "kernel parameters differ from the problem"));
        }
        if !(dt > 0.0) || levels == 0 {
            return Err(invalid("levels", "need dt > 0 and at least one level"));
        }
        let rep = Representation::new(spec.n(), settings)?;
        let g = |r: f64| data.g(spec, r);
        let free = (0..levels)
            .map(|k| {
                let t = k as f64 * dt;
                kernel
                    .grid()
                    .nodes()
                    .iter()
                    .map(|&r| rep.free_solution(&g, spec.eps(), r, t).value)
                    .collect()
            })
            .collect();
        Ok(Self {
            spec: *spec,
            kernel,
            rep,
            dt,
            levels,
            free,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.kernel.grid()
    }

    /// `eps u^0` on the output levels.
    pub fn free_part(&self) -> Result<SpaceTimeField> {
        SpaceTimeField::from_levels(self.grid().clone(), 0.0, self.dt, self.free.clone())
    }

    /// `(V * u^2) u` level by level.
    pub fn source(&self, u: &SpaceTimeField) -> Result<SpaceTimeField> {
        let len = self.grid().len();
        let mut out = SpaceTimeField::new(u.grid().clone(), u.t0(), u.dt())?;
        let mut sq = vec![0.0; len];
        for level in u.levels() {
            for (q, &x) in sq.iter_mut().zip(level) {
                *q = x * x;
            }
            let mut conv = vec![0.0; len];
            self.kernel.apply(&sq, &mut conv);
            for (c, &x) in conv.iter_mut().zip(level) {
                *c *= x;
            }
            out.push_level(conv)?;
        }
        Ok(out)
    }

    /// One application of the map.
    pub fn apply(&self, guess: &SpaceTimeField) -> Result<SpaceTimeField> {
        if guess.grid().nodes() != self.grid().nodes() {
            return Err(Error::GridMismatch("guess lives on another grid".into()));
        }
        let horizon = (self.levels - 1) as f64 * self.dt;
        if guess.levels().is_empty() || guess.t0() != 0.0 || guess.t_end() + 1e-12 < horizon {
            return Err(invalid(
                "u_guess",
                format!("levels cover [{}, {}], need [0, {horizon}]", guess.t0(), guess.t_end()),
            ));
        }
        let source = self.source(guess)?;
        let all_zero = source.levels().iter().all(|l| l.iter().all(|&v| v == 0.0));
        let nodes = self.grid().nodes();
        let mut levels = Vec::with_capacity(self.levels);
        for (k, free) in self.free.iter().enumerate() {
            let t = k as f64 * self.dt;
            let level = if all_zero {
                free.clone()
            } else {
                nodes
                    .iter()
                    .zip(free)
                    .map(|(&r, &f)| f + self.rep.duhamel(r, t, &source).value)
                    .collect()
            };
            levels.push(level);
        }
        SpaceTimeField::from_levels(self.grid().clone(), 0.0, self.dt, levels)
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }
}

/// `eps u^0 + L((V * u_guess^2) u_guess)` on `levels` levels spaced like
/// `u_guess`, default data.
pub fn picard_iterate(
    u_guess: &SpaceTimeField,
    spec: &ProblemSpec,
    kernel: &dyn ConvolutionOperator,
    settings: RepresentationSettings,
    levels: usize,
) -> Result<SpaceTimeField> {
    Picard::new(spec, kernel, InitialData::SlowDecay, u_guess.dt(), levels, settings)?.apply(u_guess)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    /// `max |u_{k+1} - u_k|` over all levels and nodes, starting from `u_0 = 0`.
    pub residuals: Vec<f64>,
    /// `residuals[k+1] / residuals[k]`.
    pub ratios: Vec<f64>,
}

impl PicardReport {
    pub fn contracting(&self) -> bool {
        !self.ratios.is_empty() && self.ratios.iter().all(|&q| q < 1.0)
    }
}

fn max_diff(a: &SpaceTimeField, b: &SpaceTimeField) -> f64 {
    a.levels()
        .iter()
        .zip(b.levels())
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

/// Runs `iterations` steps from the zero guess. Returns the iterates and the
/// residual history; a residual that grows (above round-off) is reported as
/// [`Error::Divergence`].
pub fn picard_sequence(picard: &Picard<'_>, iterations: usize) -> Result<(Vec<SpaceTimeField>, PicardReport)> {
    let zero = SpaceTimeField::from_levels(
        picard.grid().clone(),
        0.0,
        picard.dt,
        vec![vec![0.0; picard.grid().len()]; picard.levels],
    )?;
    let mut iterates = vec![zero];
    let mut residuals: Vec<f64> = Vec::new();
    for k in 0..iterations {
        let next = picard.apply(&iterates[k])?;
        let res = max_diff(&next, &iterates[k]);
        if !res.is_finite() {
            return Err(Error::Divergence {
                iterations: k + 1,
                residual: res,
            });
        }
        let scale = residuals.first().copied().unwrap_or(res);
        if let Some(&last) = residuals.last() {
            if res > last && res > 1e-12 * scale {
                return Err(Error::Divergence {
                    iterations: k + 1,
                    residual: res,
                });
            }
        }
        residuals.push(res);
        iterates.push(next);
    }
    let ratios = residuals
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .collect();
    Ok((iterates, PicardReport { residuals, ratios }))
}
