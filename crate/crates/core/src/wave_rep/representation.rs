//! Radial integral representations of the free wave and of the Duhamel term.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::field::SpaceTimeField;
use super::poly::{chebyshev_unchecked, legendre_unchecked};
use crate::error::{invalid, Result};
use crate::exponents::ProblemSpec;
use crate::radial_kernel::quadrature::{eta_integral, GaussRule, JacobiRules};
use crate::radial_kernel::{unit_sphere_area, SphereMeans};

/// A quadrature value with an error estimate (difference of two rule orders).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Resolution of the nested quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepresentationSettings {
    /// Gauss points per panel.
    pub points: usize,
    /// Upper bound on the number of panels per integration variable.
    pub max_panels: usize,
    /// Preferred panel width relative to `1 + x` for smooth data.
    pub relative_width: f64,
}

impl Default for RepresentationSettings {
    fn default() -> Self {
        Self {
            points: 12,
            max_panels: 64,
            relative_width: 0.5,
        }
    }
}

/// Dimension-specific evaluator; build once and reuse for many points.
#[derive(Debug, Clone)]
pub struct Representation {
    n: u32,
    m: u32,
    settings: RepresentationSettings,
    plain: GaussRule,
    check: GaussRule,
    // weight (t - rho)^{-1/2} at the right end of a panel
    right_half: GaussRule,
    right_half_check: GaussRule,
    inner: JacobiRules,
    inner_check: JacobiRules,
}

impl Representation {
    pub fn new(n: u32, settings: RepresentationSettings) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "dimension must be positive"));
        }
        if settings.points < 4 {
            return Err(invalid("points", "need at least 4 points per panel"));
        }
        let p = settings.points;
        Ok(Self {
            n,
            m: n / 2,
            settings,
            plain: GaussRule::legendre(p),
            check: GaussRule::legendre(p - 2),
            right_half: GaussRule::jacobi(p, -0.5, 0.0),
            right_half_check: GaussRule::jacobi(p - 2, -0.5, 0.0),
            inner: JacobiRules::new(-0.5, p),
            inner_check: JacobiRules::new(-0.5, p - 2),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn breaks(&self, lo: f64, hi: f64, min_width: f64) -> Vec<f64> {
        let mut out = Vec::new();
        out.push(lo);
        if hi <= lo {
            return out;
        }
        let floor = ((hi - lo) / self.settings.max_panels as f64).max(min_width);
        let mut x = lo;
        loop {
            let step = (self.settings.relative_width * (1.0 + x.abs())).max(floor);
            if x + 1.05 * step >= hi {
                out.push(hi);
                return out;
            }
            x += step;
            out.push(x);
        }
    }

    fn composite(&self, rule: &GaussRule, breaks: &[f64], f: &impl Fn(f64) -> f64) -> f64 {
        breaks
            .windows(2)
            .map(|w| rule.integrate(w[0], w[1], f))
            .sum()
    }

    fn composite_estimate(&self, breaks: &[f64], f: impl Fn(f64) -> f64) -> Estimate {
        let value = self.composite(&self.plain, breaks, &f);
        let coarse = self.composite(&self.check, breaks, &f);
        Estimate {
            value,
            error: (value - coarse).abs(),
        }
    }

    /// `int_0^t (t - rho)^{-1/2} phi(rho) d rho` on composite panels whose
    /// last panel carries the exact square-root weight; `split` adds a break.
    fn half_weight(&self, t: f64, split: Option<f64>, min_width: f64, phi: impl Fn(f64) -> f64) -> Estimate {
        let mut breaks = match split {
            Some(s) if s > 0.0 && s < t => {
                let mut b = self.breaks(0.0, s, min_width);
                let tail = self.breaks(s, t, min_width);
                b.extend_from_slice(&tail[1..]);
                b
            }
            _ => self.breaks(0.0, t, min_width),
        };
        if breaks.len() < 2 {
            breaks.push(t);
        }
        let k = breaks.len() - 1;
        let eval = |plain: &GaussRule, weighted: &GaussRule| {
            let mut acc = 0.0;
            for w in breaks[..k].windows(2) {
                acc += plain.integrate(w[0], w[1], |x| (t - x).powf(-0.5) * phi(x));
            }
            acc + weighted.integrate(breaks[k - 1], t, &phi)
        };
        let value = eval(&self.plain, &self.right_half);
        let coarse = eval(&self.check, &self.right_half_check);
        Estimate {
            value,
            error: (value - coarse).abs(),
        }
    }

    /// `eps u^0(r, t)` for `f = 0` and radial `g`.
    pub fn free_solution(&self, g: &impl Fn(f64) -> f64, eps: f64, r: f64, t: f64) -> Estimate {
        if t == 0.0 {
            return Estimate { value: 0.0, error: 0.0 };
        }
        if self.n >= 2 && r == 0.0 {
            return self.origin_limit(t, |x| self.free_solution_positive(g, eps, x, t));
        }
        self.free_solution_positive(g, eps, r, t)
    }

    fn free_solution_positive(&self, g: &impl Fn(f64) -> f64, eps: f64, r: f64, t: f64) -> Estimate {
        let n = self.n;
        if n == 1 {
            let (lo, hi) = (r - t, r + t);
            let f = |y: f64| g(y.abs());
            let est = if lo < 0.0 {
                let a = self.composite_estimate(&self.breaks(0.0, -lo, 0.0), f);
                let b = self.composite_estimate(&self.breaks(0.0, hi, 0.0), f);
                Estimate {
                    value: a.value + b.value,
                    error: a.error + b.error,
                }
            } else {
                self.composite_estimate(&self.breaks(lo, hi, 0.0), f)
            };
            return scale(est, 0.5 * eps);
        }
        let m = self.m;
        if n % 2 == 1 {
            let lo = (r - t).abs();
            let hi = r + t;
            let est = self.composite_estimate(&self.breaks(lo, hi, 0.0), |lam| {
                let z = odd_argument(lam, r, t);
                lam.powi(m as i32) * g(lam) * legendre_unchecked(m - 1, z)
            });
            return scale(est, 0.5 * eps / r.powi(m as i32));
        }
        let est = self.j_integral(r, t, 0.0, &|lam| g(lam));
        scale(est, 2.0 * eps / (PI * r.powi(m as i32 - 1)))
    }

    /// `J(r, tau, w) = int_0^tau rho / sqrt(tau^2 - rho^2) int_{|r-rho|}^{r+rho}
    /// lambda^m w T_{m-1}(z) / sqrt((lambda^2 - (r-rho)^2)((r+rho)^2 - lambda^2))`,
    /// with `z = (lambda^2 + r^2 - rho^2) / (2 r lambda)`.
    fn j_integral(&self, r: f64, tau: f64, min_width: f64, w: &impl Fn(f64) -> f64) -> Estimate {
        let m = self.m;
        let inner = |rules: &JacobiRules, rho: f64| {
            let lo = (r - rho).abs();
            let hi = r + rho;
            eta_integral(rules, lo, hi, |lam| {
                let z = even_argument(lam, r, rho);
                lam.powi(m as i32) * w(lam) * chebyshev_unchecked(m - 1, z)
                    / ((lam + lo) * (lam + hi)).sqrt()
            })
        };
        let fine = self.half_weight(tau, Some(r), min_width, |rho| {
            if rho == 0.0 {
                return 0.0;
            }
            rho / (tau + rho).sqrt() * inner(&self.inner, rho)
        });
        let coarse = self.half_weight(tau, Some(r), min_width, |rho| {
            if rho == 0.0 {
                return 0.0;
            }
            rho / (tau + rho).sqrt() * inner(&self.inner_check, rho)
        });
        Estimate {
            value: fine.value,
            error: fine.error + (fine.value - coarse.value).abs(),
        }
    }

    /// Radial representations are singular at `r = 0`. The solution is even
    /// in `r`, so the value there is extrapolated from `r = h, 2h, 3h` with
    /// weights cancelling the `r^2` and `r^4` terms. A smaller `h` would lose
    /// digits to cancellation in the high-degree kernels.
    fn origin_limit(&self, t: f64, f: impl Fn(f64) -> Estimate) -> Estimate {
        let h = 0.02 * t.min(1.0);
        let a = f(h);
        let b = f(2.0 * h);
        let c = f(3.0 * h);
        Estimate {
            value: 1.5 * a.value - 0.6 * b.value + 0.1 * c.value,
            error: 1.5 * a.error + 0.6 * b.error + 0.1 * c.error,
        }
    }

    /// Duhamel term for the source `F(lambda, s) / (1 + s)^2`, evaluated at
    /// `(r, t)`. `F` must cover `[0, t]`.
    pub fn duhamel(&self, r: f64, t: f64, source: &SpaceTimeField) -> Estimate {
        if t == 0.0 {
            return Estimate { value: 0.0, error: 0.0 };
        }
        if self.n >= 2 && r == 0.0 {
            return self.origin_limit(t, |x| self.duhamel_positive(x, t, source));
        }
        self.duhamel_positive(r, t, source)
    }

    fn duhamel_positive(&self, r: f64, t: f64, source: &SpaceTimeField) -> Estimate {
        let n = self.n;
        let m = self.m;
        let dr = source.grid().dr().unwrap_or(0.0);
        let s_panels = ((t / source.dt()).ceil() as usize).clamp(1, self.settings.max_panels);
        let s_breaks: Vec<f64> = (0..=s_panels).map(|k| t * k as f64 / s_panels as f64).collect();
        let lambda_width = 2.0 * dr;
        let at_time = |s: f64| -> Estimate {
            let tau = t - s;
            let weight = (1.0 + s).powi(-2);
            if tau <= 0.0 {
                return Estimate { value: 0.0, error: 0.0 };
            }
            let w = |lam: f64| source.sample(lam, s);
            let inner = if n == 1 {
                let (lo, hi) = (r - tau, r + tau);
                let f = |y: f64| w(y.abs());
                if lo < 0.0 {
                    let a = self.composite_estimate(&self.uniform_breaks(0.0, -lo, lambda_width), f);
                    let b = self.composite_estimate(&self.uniform_breaks(0.0, hi, lambda_width), f);
                    Estimate {
                        value: 0.5 * (a.value + b.value),
                        error: 0.5 * (a.error + b.error),
                    }
                } else {
                    scale(self.composite_estimate(&self.uniform_breaks(lo, hi, lambda_width), f), 0.5)
                }
            } else if n % 2 == 1 {
                let lo = (r - tau).abs();
                let hi = r + tau;
                let est = self.composite_estimate(&self.uniform_breaks(lo, hi, lambda_width), |lam| {
                    let z = odd_argument(lam, r, tau);
                    lam.powi(m as i32) * w(lam) * legendre_unchecked(m - 1, z)
                });
                scale(est, 0.5 / r.powi(m as i32))
            } else {
                let est = self.j_integral(r, tau, lambda_width, &w);
                scale(est, 2.0 / (PI * r.powi(m as i32 - 1)))
            };
            scale(inner, weight)
        };
        let run = |rule: &GaussRule| {
            let mut value = 0.0;
            let mut error = 0.0;
            for win in s_breaks.windows(2) {
                let half = 0.5 * (win[1] - win[0]);
                for (x, wt) in rule.nodes().iter().zip(rule.weights()) {
                    let e = at_time(win[0] + half * (1.0 + x));
                    value += half * wt * e.value;
                    error += half * wt * e.error;
                }
            }
            Estimate { value, error }
        };
        let fine = run(&self.plain);
        let coarse = run(&self.check);
        Estimate {
            value: fine.value,
            error: fine.error + (fine.value - coarse.value).abs(),
        }
    }

    fn uniform_breaks(&self, lo: f64, hi: f64, width: f64) -> Vec<f64> {
        let count = if width > 0.0 {
            ((hi - lo) / width).ceil() as usize
        } else {
            1
        }
        .clamp(1, self.settings.max_panels);
        (0..=count)
            .map(|k| lo + (hi - lo) * k as f64 / count as f64)
            .collect()
    }
}

fn scale(e: Estimate, factor: f64) -> Estimate {
    Estimate {
        value: e.value * factor,
        error: e.error * factor.abs(),
    }
}

/// `(lambda^2 + r^2 - tau^2) / (2 r lambda)` clamped to `[-1, 1]`.
fn odd_argument(lam: f64, r: f64, tau: f64) -> f64 {
    if lam == 0.0 {
        return 1.0;
    }
    ((lam * lam + (r - tau) * (r + tau)) / (2.0 * r * lam)).clamp(-1.0, 1.0)
}

fn even_argument(lam: f64, r: f64, rho: f64) -> f64 {
    odd_argument(lam, r, rho)
}

fn default_rep(n: u32) -> Result<Representation> {
    Representation::new(n, RepresentationSettings::default())
}

/// `eps u^0(|x|, t)` for data `f = 0`, `g` radial.
pub fn free_solution_u0(g: impl Fn(f64) -> f64, spec: &ProblemSpec, x_norm: f64, t: f64) -> Result<f64> {
    check_point(x_norm, t)?;
    Ok(default_rep(spec.n())?.free_solution(&g, spec.eps(), x_norm, t).value)
}

/// Odd-dimensional Duhamel term with the Legendre kernel.
pub fn duhamel_term_odd(r: f64, t: f64, source: &SpaceTimeField, spec: &ProblemSpec) -> Result<Estimate> {
    let n = spec.n();
    if n % 2 == 0 || n < 3 {
        return Err(invalid("n", format!("odd n >= 3 required, got {n}")));
    }
    check_point(r, t)?;
    check_horizon(source, t)?;
    Ok(default_rep(n)?.duhamel(r, t, source))
}

/// Even-dimensional Duhamel term with the Chebyshev kernel.
pub fn duhamel_term_even(r: f64, t: f64, source: &SpaceTimeField, spec: &ProblemSpec) -> Result<Estimate> {
    let n = spec.n();
    if n % 2 == 1 {
        return Err(invalid("n", format!("even n required, got {n}")));
    }
    check_point(r, t)?;
    check_horizon(source, t)?;
    Ok(default_rep(n)?.duhamel(r, t, source))
}

fn check_point(r: f64, t: f64) -> Result<()> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid("r", format!("must be finite and >= 0, got {r}")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(invalid("t", format!("must be finite and >= 0, got {t}")));
    }
    Ok(())
}

fn check_horizon(source: &SpaceTimeField, t: f64) -> Result<()> {
    if source.levels().is_empty() || source.t0() > 0.0 || source.t_end() + 1e-12 * (1.0 + t) < t {
        return Err(invalid(
            "source",
            format!(
                "time levels cover [{}, {}], need [0, {t}]",
                source.t0(),
                source.t_end()
            ),
        ));
    }
    Ok(())
}

/// Spherical mean `M(phi | x, t)`: the surface mean for odd `n`, the
/// weighted ball mean with `1/sqrt(1 - |xi|^2)` for even `n`.
pub fn spherical_mean(phi: impl Fn(f64) -> f64, x_norm: f64, t: f64, n: u32) -> Result<f64> {
    check_point(x_norm, t)?;
    if t == 0.0 {
        return Ok(phi(x_norm));
    }
    let means = SphereMeans::new(n, 24)?;
    if n % 2 == 1 {
        return Ok(means.integral(&phi, x_norm, t) / unit_sphere_area(n));
    }
    // (2 / omega_{n+1}) int_0^1 s^{n-1} (1 - s^2)^{-1/2} int_S phi(|x + t s omega|) dS ds
    let rep = default_rep(n)?;
    let split = x_norm / t;
    let est = rep.half_weight(1.0, Some(split), 0.0, |s| {
        s.powi(n as i32 - 1) / (1.0 + s).sqrt() * means.integral(&phi, x_norm, t * s)
    });
    Ok(2.0 / unit_sphere_area(n + 1) * est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_kernel::RadialGrid;
    use alloc::sync::Arc;

    fn spec(n: u32, eps: f64) -> ProblemSpec {
        ProblemSpec::new(n, 0.5, 2.0, 0.1, 1.0, 1.0, eps).unwrap()
    }

    #[test]
    fn constant_data_examples() {
        let s1 = spec(1, 0.3);
        assert!((free_solution_u0(|_| 1.0, &s1, 5.0, 2.0).unwrap() - 0.6).abs() < 1e-13);
        let s3 = spec(3, 0.3);
        assert!((free_solution_u0(|_| 1.0, &s3, 5.0, 2.0).unwrap() - 0.6).abs() < 1e-13);
        // g = 1 gives eps t in every dimension
        for n in 2..=6u32 {
            let s = spec(n, 1.0);
            for &(r, t) in &[(5.0, 2.0), (0.5, 2.0), (0.0, 1.5), (3.0, 0.25)] {
                let v = free_solution_u0(|_| 1.0, &s, r, t).unwrap();
                assert!((v - t).abs() < 1e-8 * t, "n {n} ({r},{t}): {v}");
            }
        }
    }

    #[test]
    fn three_dimensional_spherical_means_formula() {
        let s = spec(3, 1.0);
        let g = |x: f64| (1.0 + x * x).powf(-0.75);
        for &(r, t) in &[(0.7, 2.0), (4.0, 1.0), (2.0, 2.0)] {
            let v = free_solution_u0(g, &s, r, t).unwrap();
            // textbook: (1/2r) int_{|r-t|}^{r+t} lambda g(lambda) d lambda,
            // closed form since d/dl (1+l^2)^{1/4} = (l/2)(1+l^2)^{-3/4}
            let prim = |l: f64| 2.0 * (1.0 + l * l).powf(0.25);
            let expect = (prim(r + t) - prim((r - t).abs())) / (2.0 * r);
            assert!((v - expect).abs() < 1e-10 * expect.abs(), "{v} vs {expect}");
        }
    }

    #[test]
    fn spherical_mean_examples() {
        for n in 2..=7u32 {
            let v = spherical_mean(|_| 2.5, 0.7, 1.3, n).unwrap();
            assert!((v - 2.5).abs() < 1e-10, "n {n}: {v}");
        }
        let v = spherical_mean(|x| x * x, 0.0, 1.0, 3).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
        assert_eq!(spherical_mean(|x| x + 1.0, 0.4, 0.0, 4).unwrap(), 1.4);
    }

    #[test]
    fn duhamel_zero_and_constant_sources() {
        let grid = Arc::new(RadialGrid::uniform(0.05, 20.0, 1).unwrap());
        let zero = SpaceTimeField::from_fn(grid.clone(), 0.0, 0.05, 21, |_, _| 0.0).unwrap();
        assert_eq!(duhamel_term_odd(1.0, 1.0, &zero, &spec(3, 1.0)).unwrap().value, 0.0);
        assert_eq!(duhamel_term_even(1.0, 1.0, &zero, &spec(2, 1.0)).unwrap().value, 0.0);
        let one = SpaceTimeField::from_fn(grid, 0.0, 0.05, 21, |_, _| 1.0).unwrap();
        let v = duhamel_term_odd(10.0, 1.0, &one, &spec(3, 1.0)).unwrap();
        let expect = 1.0 - 2f64.ln();
        assert!((v.value - expect).abs() < 1e-10, "{v:?}");
        // the free wave of g = 1 is t in every dimension, so F = 1 gives
        // int_0^t (t - s)(1 + s)^{-2} ds = t - ln(1 + t)
        let v = duhamel_term_even(10.0, 1.0, &one, &spec(2, 1.0)).unwrap();
        let expect = 1.0 - 2f64.ln();
        assert!((v.value - expect).abs() < 1e-8, "{v:?}");
        assert!(duhamel_term_even(1.0, 1.0, &one, &spec(3, 1.0)).is_err());
        assert!(duhamel_term_odd(1.0, 2.0, &one, &spec(3, 1.0)).is_err());
    }
}
