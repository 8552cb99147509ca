//! Independent reference computations for the radial convolution and the
//! sphere integrals.
//!
//! Nothing here goes through the core's kernel or its Gauss–Jacobi rules:
//! the convolution is integrated in polar coordinates centred at `x`
//! (which removes the `|x - y|^{-gamma}` singularity analytically) and the
//! sphere integrals are reduced to the polar angle only.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid oracle input `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("no convergence within {evaluations} evaluations: partial estimate {partial} +/- {error}")]
    NotConverged {
        partial: f64,
        error: f64,
        evaluations: usize,
    },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> OracleError {
    OracleError::Invalid {
        field,
        reason: reason.into(),
    }
}

/// Area of the unit sphere `S^{n-1}` in `R^n`, by the two-step recurrence
/// `|S^{n+1}| = 2 pi |S^{n-1}| / n`.
pub fn sphere_area(n: u32) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(n - 2) / (n - 2) as f64,
    }
}

/// A radial profile `U(|y|)` together with what the oracle needs to know
/// about its regularity.
#[derive(Clone)]
pub struct RadialProfile {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// `U = 0` for `rho > support`; `None` for an integrable tail.
    pub support: Option<f64>,
    /// Radii where `U` or a low derivative jumps.
    pub breaks: Vec<f64>,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("support", &self.support)
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, support: Option<f64>) -> Self {
        Self {
            f: Arc::new(f),
            support,
            breaks: Vec::new(),
        }
    }

    pub fn with_breaks(mut self, breaks: &[f64]) -> Self {
        self.breaks = breaks.to_vec();
        self
    }

    /// Indicator of the unit ball.
    pub fn unit_ball() -> Self {
        Self::new(|rho| if rho <= 1.0 { 1.0 } else { 0.0 }, Some(1.0)).with_breaks(&[1.0])
    }

    /// `(1 - (rho/a)^2)^k` on `[0, a]`.
    pub fn polynomial_bump(a: f64, k: i32) -> Self {
        Self::new(
            move |rho| {
                let x = rho / a;
                if x < 1.0 {
                    (1.0 - x * x).powi(k)
                } else {
                    0.0
                }
            },
            Some(a),
        )
        .with_breaks(&[a])
    }

    pub fn gaussian(width: f64) -> Self {
        Self::new(move |rho| (-(rho / width).powi(2)).exp(), None)
    }

    pub fn eval(&self, rho: f64) -> f64 {
        (self.f)(rho)
    }

    fn all_breaks(&self) -> Vec<f64> {
        let mut b = self.breaks.clone();
        b.extend(self.support);
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

/// Value with an error estimate: a quadrature error bound for the
/// deterministic path, one standard error for Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub value: f64,
    pub error: f64,
    pub method: OracleMethod,
    /// Integrand evaluations or samples.
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    AdaptiveQuadrature,
    MonteCarlo,
}

/// Budget and tolerances of [`oracle_direct_convolution_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    pub rel_tol: f64,
    pub max_evaluations: usize,
    pub samples: usize,
    /// Strata in the radius CDF of each Monte-Carlo proposal.
    pub strata: usize,
    /// Strata in the polar angle.
    pub angular_strata: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_evaluations: 20_000_000,
            samples: 1 << 22,
            strata: 1 << 10,
            angular_strata: 64,
        }
    }
}

/// Adaptive Gauss–Legendre: each interval is integrated with 10 and 20
/// points, and the interval with the largest disagreement is bisected.
struct Adaptive {
    coarse: GaussLegendre,
    fine: GaussLegendre,
}

impl Adaptive {
    fn new() -> Self {
        Self {
            coarse: GaussLegendre::new(NonZeroUsize::new(10).unwrap()),
            fine: GaussLegendre::new(NonZeroUsize::new(20).unwrap()),
        }
    }

    fn panel(&self, a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> (f64, f64) {
        let c = self.coarse.integrate(a, b, &mut *f);
        let v = self.fine.integrate(a, b, &mut *f);
        (v, (v - c).abs())
    }

    /// `int f` over consecutive `[points[i], points[i+1]]`.
    fn integrate(
        &self,
        points: &[f64],
        abs_tol: f64,
        rel_tol: f64,
        budget: usize,
        mut f: impl FnMut(f64) -> f64,
    ) -> Result<(f64, f64, usize), OracleError> {
        let mut panels: Vec<(f64, f64, f64, f64)> = Vec::new();
        let mut evals = 0;
        for w in points.windows(2) {
            if w[1] > w[0] {
                let (v, e) = self.panel(w[0], w[1], &mut f);
                evals += 30;
                panels.push((w[0], w[1], v, e));
            }
        }
        loop {
            let total: f64 = panels.iter().map(|p| p.2).sum();
            let error: f64 = panels.iter().map(|p| p.3).sum();
            if error <= abs_tol.max(rel_tol * total.abs()) {
                return Ok((total, error, evals));
            }
            if evals >= budget {
                return Err(OracleError::NotConverged {
                    partial: total,
                    error,
                    evaluations: evals,
                });
            }
            let worst = panels
                .iter()
                .enumerate()
                .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
                .map(|(i, _)| i)
                .unwrap();
            let (a, b, _, _) = panels.swap_remove(worst);
            let m = 0.5 * (a + b);
            if !(m > a && m < b) {
                // interval exhausted at double precision
                return Err(OracleError::NotConverged {
                    partial: total,
                    error,
                    evaluations: evals,
                });
            }
            let (v1, e1) = self.panel(a, m, &mut f);
            let (v2, e2) = self.panel(m, b, &mut f);
            evals += 60;
            panels.push((a, m, v1, e1));
            panels.push((m, b, v2, e2));
        }
    }
}

/// `cos theta` at which `|x + s omega| = rho` for `|x| = r`.
fn crossing_angle(r: f64, s: f64, rho: f64) -> Option<f64> {
    let c = (rho * rho - r * r - s * s) / (2.0 * r * s);
    (c > -1.0 && c < 1.0).then(|| c.acos())
}

/// `int_{R^n} U(|y|) |x - y|^{-gamma} dy` at `|x| = x_norm`.
///
/// For `n <= 3` the integral is written as
/// `int_0^inf s^{n-1-gamma} int_{S^{n-1}} U(|x + s omega|) d omega ds`
/// and both factors are integrated adaptively (with `s = sigma^2` to
/// flatten the origin and break points at the radii where `|x + s omega|`
/// crosses a break of `U`). For `n >= 4` the same integral is sampled:
/// `omega` uniform on the sphere and `s` from the density
/// `~ s^{n-1-gamma}` on `[0, x_norm + support]`, stratified in its CDF.
/// `seed` only matters on the Monte-Carlo path.
pub fn oracle_direct_convolution(
    u: &RadialProfile,
    x_norm: f64,
    n: u32,
    gamma: f64,
    seed: u64,
) -> Result<OracleEstimate, OracleError> {
    oracle_direct_convolution_with(u, x_norm, n, gamma, seed, &OracleSettings::default())
}

pub fn oracle_direct_convolution_with(
    u: &RadialProfile,
    x_norm: f64,
    n: u32,
    gamma: f64,
    seed: u64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    if n == 0 {
        return Err(invalid("n", "dimension must be positive"));
    }
    if !(gamma >= 0.0 && gamma < n as f64) {
        return Err(invalid("gamma", format!("must lie in [0, {n}), got {gamma}")));
    }
    if !(x_norm >= 0.0 && x_norm.is_finite()) {
        return Err(invalid("x_norm", format!("must be finite and >= 0, got {x_norm}")));
    }
    if n <= 3 {
        adaptive_convolution(u, x_norm, n, gamma, settings)
    } else {
        monte_carlo_convolution(u, x_norm, n, gamma, seed, settings)
    }
}

fn adaptive_convolution(
    u: &RadialProfile,
    r: f64,
    n: u32,
    gamma: f64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    let quad = Adaptive::new();
    let breaks = u.all_breaks();
    // outer break points in s: |x + s omega| ranges over [|s - r|, s + r]
    let mut s_points = vec![0.0];
    for &b in &breaks {
        s_points.push(b + r);
        if b > r {
            s_points.push(b - r);
        } else {
            s_points.push(r - b);
        }
    }
    s_points.retain(|s| *s >= 0.0);
    s_points.sort_by(f64::total_cmp);
    s_points.dedup();
    let s_max = u.support.map(|a| a + r);
    let inner_budget = settings.max_evaluations / 100;
    // absolute floor for near-empty shells, relative to the size of U
    let extent = u.support.unwrap_or(r + 10.0);
    let u_scale = (0..=256)
        .map(|k| u.eval(extent * k as f64 / 256.0).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let inner_abs = 1e-3 * settings.rel_tol * u_scale;
    let mut evals = 0usize;
    let mut failure: Option<OracleError> = None;

    // sphere integral of U(|x + s omega|)
    let mut sphere = |s: f64| -> f64 {
        if s == 0.0 || r == 0.0 {
            return sphere_area(n) * u.eval(s.max(r));
        }
        if n == 1 {
            return u.eval(r + s) + u.eval((r - s).abs());
        }
        let mut thetas = vec![0.0, PI];
        thetas.extend(breaks.iter().filter_map(|&b| crossing_angle(r, s, b)));
        thetas.sort_by(f64::total_cmp);
        let weight = sphere_area(n - 1);
        let res = quad.integrate(&thetas, inner_abs, settings.rel_tol * 1e-2, inner_budget, |th| {
            let eta = (r * r + s * s + 2.0 * r * s * th.cos()).max(0.0).sqrt();
            u.eval(eta) * th.sin().powi(n as i32 - 2)
        });
        match res {
            Ok((v, _, e)) => {
                evals += e;
                weight * v
            }
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        }
    };

    // s = sigma^2: ds = 2 sigma d sigma
    let power = n as f64 - 1.0 - gamma;
    let mut integrand = |sigma: f64| {
        let s = sigma * sigma;
        if sigma == 0.0 {
            return if 2.0 * power + 1.0 > 0.0 { 0.0 } else { 2.0 * sphere(0.0) };
        }
        2.0 * sigma.powf(2.0 * power + 1.0) * sphere(s)
    };
    let outer = match s_max {
        Some(top) => {
            let sig: Vec<f64> = s_points
                .iter()
                .copied()
                .filter(|&s| s <= top)
                .chain(std::iter::once(top))
                .map(f64::sqrt)
                .collect();
            let mut sig = sig;
            sig.sort_by(f64::total_cmp);
            sig.dedup();
            quad.integrate(&sig, 1e-300, settings.rel_tol, settings.max_evaluations, &mut integrand)
        }
        None => {
            // finite part on [0, L], then sigma = L / tau on the tail
            let l = s_points.last().copied().unwrap_or(0.0).max(1.0) + r;
            let sl = l.sqrt();
            let mut sig: Vec<f64> = s_points.iter().map(|s| s.sqrt()).collect();
            sig.push(sl);
            sig.sort_by(f64::total_cmp);
            sig.dedup();
            quad.integrate(&sig, 1e-300, settings.rel_tol, settings.max_evaluations / 2, &mut integrand)
                .and_then(|(v1, e1, n1)| {
                    let (v2, e2, n2) = quad.integrate(
                &[0.0, 1.0],
                1e-300,
                settings.rel_tol,
                settings.max_evaluations / 2,
                |tau: f64| {
                    if tau == 0.0 {
                        return 0.0;
                    }
                    let v = integrand(sl / tau) * sl / (tau * tau);
                    if v.is_finite() {
                        v
                    } else {
                        0.0
                    }
                },
            )?;
                    Ok((v1 + v2, e1 + e2, n1 + n2))
                })
        }
    };
    if let Some(err) = failure {
        return Err(err);
    }
    let (value, error, outer) = outer?;
    Ok(OracleEstimate {
        value,
        error,
        method: OracleMethod::AdaptiveQuadrature,
        evaluations: outer + evals,
    })
}

/// Balance-heuristic mixture of two proposals, half the samples each: the
/// shifted power law `~ |y - x|^{-gamma}` on `|y - x| <= |x| + a` (it
/// cancels the kernel singularity) and the uniform density on the support
/// ball `|y| <= a` (it covers the mass of `U` when `x` is far away).
///
/// The integrand only sees the sampled radius and the polar angle `theta`
/// between the sampled direction and `x`, so each proposal is stratified on
/// a (radius CDF x `theta`) grid; `theta` is drawn uniformly in its stratum
/// and reweighted by the exact marginal `sin^{n-2} theta / c_n` of a
/// uniform direction in `R^n`.
fn monte_carlo_convolution(
    u: &RadialProfile,
    r: f64,
    n: u32,
    gamma: f64,
    seed: u64,
    settings: &OracleSettings,
) -> Result<OracleEstimate, OracleError> {
    let a = u
        .support
        .ok_or_else(|| invalid("u", "the Monte-Carlo path needs compactly supported data"))?;
    let radial = settings.strata.max(1);
    let angular = settings.angular_strata.max(1);
    let cells = radial * angular;
    let per = (settings.samples / (2 * cells)).max(2);
    let top = r + a;
    let k = n as f64 - gamma;
    let area = sphere_area(n);
    // pi times the density of theta for a uniform direction
    let theta_weight = PI * sphere_area(n - 1) / area;
    let q_shift = |d: f64| if d <= top { k * d.powf(-gamma) / (top.powf(k) * area) } else { 0.0 };
    let q_ball = |y: f64| if y <= a { n as f64 / (area * a.powf(n as f64)) } else { 0.0 };
    let weight = |y_norm: f64, d: f64| {
        let f = u.eval(y_norm) * d.powf(-gamma);
        if f == 0.0 {
            0.0
        } else {
            f / (0.5 * q_shift(d) + 0.5 * q_ball(y_norm))
        }
    };

    // one job (and one RNG stream) per radial stratum of each proposal, so
    // the result does not depend on the thread count
    let jobs: Vec<(usize, usize)> = (0..2).flat_map(|c| (0..radial).map(move |i| (c, i))).collect();
    let sums: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(component, i)| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream((component * radial + i) as u64);
            let cell = 1.0 / cells as f64;
            let (mut mean_acc, mut var_acc) = (0.0, 0.0);
            for j in 0..angular {
                let (mut sum, mut sum2) = (0.0, 0.0);
                for _ in 0..per {
                    let q = (i as f64 + rng.gen::<f64>()) / radial as f64;
                    let theta = PI * (j as f64 + rng.gen::<f64>()) / angular as f64;
                    let c = theta.cos();
                    let ang = theta_weight * theta.sin().powi(n as i32 - 2);
                    let (y_norm, d) = if component == 0 {
                        // y = x + s omega
                        let s = top * q.powf(1.0 / k);
                        ((r * r + s * s + 2.0 * r * s * c).max(0.0).sqrt(), s)
                    } else {
                        let rho = a * q.powf(1.0 / n as f64);
                        (rho, (r * r + rho * rho - 2.0 * r * rho * c).max(0.0).sqrt())
                    };
                    let w = ang * weight(y_norm, d);
                    sum += w;
                    sum2 += w * w;
                }
                let m = sum / per as f64;
                let var = (sum2 / per as f64 - m * m).max(0.0) * per as f64 / (per as f64 - 1.0);
                mean_acc += 0.5 * m * cell;
                var_acc += 0.25 * var / per as f64 * cell * cell;
            }
            (mean_acc, var_acc)
        })
        .collect();
    let value: f64 = sums.iter().map(|p| p.0).sum();
    let variance: f64 = sums.iter().map(|p| p.1).sum();
    Ok(OracleEstimate {
        value,
        error: variance.sqrt(),
        method: OracleMethod::MonteCarlo,
        evaluations: 2 * per * cells,
    })
}

/// `int_{|omega| = 1} b(|x + rho omega|) dS_omega` in `R^n`, `|x| = x_norm`,
/// as `|S^{n-2}| int_0^pi b(sqrt(r^2 + rho^2 + 2 r rho cos theta)) sin^{n-2}
/// theta d theta` with composite Gauss–Legendre in `theta`.
pub fn oracle_sphere_quadrature(b: impl Fn(f64) -> f64, x_norm: f64, rho: f64, n: u32) -> f64 {
    assert!(n >= 2, "the sphere oracle needs n >= 2");
    let rule = GaussLegendre::new(NonZeroUsize::new(24).unwrap());
    let panels = 64;
    let h = PI / panels as f64;
    let (r, p) = (x_norm, rho);
    let mut total = 0.0;
    for k in 0..panels {
        let lo = k as f64 * h;
        total += rule.integrate(lo, lo + h, |th| {
            let eta = (r * r + p * p + 2.0 * r * p * th.cos()).max(0.0).sqrt();
            b(eta) * th.sin().powi(n as i32 - 2)
        });
    }
    sphere_area(n - 1) * total
}
