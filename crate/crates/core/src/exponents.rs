//! Critical exponents, the problem parameters, and the Liouville and scaling
//! transforms relating the damped and undamped formulations.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::wave_rep::{FieldMeta, RadialField, SpaceTimeField, Unknown};

/// All scalar parameters of a run.
///
/// Serialized as a flat JSON object with the keys `n`, `gamma`, `mu`, `nu`,
/// `a`, `r`, `eps`; unknown keys are rejected. Every constructor validates,
/// so the rest of the crate assumes a well-formed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblemSpec", into = "RawProblemSpec")]
pub struct ProblemSpec {
    n: u32,
    gamma: f64,
    mu: f64,
    nu: f64,
    amplitude: f64,
    inner_radius: f64,
    eps: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblemSpec {
    n: u32,
    gamma: f64,
    mu: f64,
    nu: f64,
    a: f64,
    r: f64,
    eps: f64,
}

impl TryFrom<RawProblemSpec> for ProblemSpec {
    type Error = Error;

    fn try_from(raw: RawProblemSpec) -> Result<Self> {
        ProblemSpec::new(raw.n, raw.gamma, raw.mu, raw.nu, raw.a, raw.r, raw.eps)
    }
}

impl From<ProblemSpec> for RawProblemSpec {
    fn from(s: ProblemSpec) -> Self {
        RawProblemSpec {
            n: s.n,
            gamma: s.gamma,
            mu: s.mu,
            nu: s.nu,
            a: s.amplitude,
            r: s.inner_radius,
            eps: s.eps,
        }
    }
}

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {x}")))
    }
}

impl ProblemSpec {
    pub fn new(
        n: u32,
        gamma: f64,
        mu: f64,
        nu: f64,
        amplitude: f64,
        inner_radius: f64,
        eps: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "spatial dimension must be at least 1"));
        }
        check_gamma(n, gamma)?;
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(invalid("mu", format!("must be finite and >= 0, got {mu}")));
        }
        positive("nu", nu)?;
        positive("a", amplitude)?;
        positive("r", inner_radius)?;
        positive("eps", eps)?;
        Ok(Self {
            n,
            gamma,
            mu,
            nu,
            amplitude,
            inner_radius,
            eps,
        })
    }

    /// The blow-up configuration: `mu = 2`, `R = 1`.
    pub fn blowup(n: u32, gamma: f64, nu: f64, amplitude: f64, eps: f64) -> Result<Self> {
        let spec = Self::new(n, gamma, 2.0, nu, amplitude, 1.0, eps)?;
        spec.require_supercritical()?;
        Ok(spec)
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.gamma,
            self.mu,
            self.nu,
            self.amplitude,
            self.inner_radius,
            eps,
        )
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(
            self.n,
            self.gamma,
            mu,
            self.nu,
            self.amplitude,
            self.inner_radius,
            self.eps,
        )
    }

    /// `n - gamma - 2 nu`, positive exactly in the scaling supercritical case.
    pub fn supercritical_gap(&self) -> f64 {
        self.n as f64 - self.gamma - 2.0 * self.nu
    }

    /// Checks `nu < (n - gamma) / 2`, required by every blow-up experiment.
    pub fn require_supercritical(&self) -> Result<()> {
        let nu_c = critical_decay(self.n, self.gamma, 2.0)?;
        if self.nu < nu_c {
            Ok(())
        } else {
            Err(Error::Hypothesis {
                hypothesis: "nu < nu_c",
                detail: format!("nu = {} is not below nu_c = {}", self.nu, nu_c),
            })
        }
    }
}

fn check_gamma(n: u32, gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 && gamma < n as f64 {
        Ok(())
    } else {
        Err(invalid(
            "gamma",
            format!("must lie in (0, {n}), got {gamma}"),
        ))
    }
}

/// A real number or `+inf`, kept as a tag so comparisons stay total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinite)
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.partial_cmp(b),
            (ExtendedReal::Finite(_), ExtendedReal::Infinite) => Some(Ordering::Less),
            (ExtendedReal::Infinite, ExtendedReal::Finite(_)) => Some(Ordering::Greater),
            (ExtendedReal::Infinite, ExtendedReal::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinite => f.write_str("inf"),
        }
    }
}

/// Strauss exponent: the positive root of `(n-1)p^2 - (n+1)p - 2 = 0`,
/// infinite for `n = 1`.
pub fn strauss_exponent(n: u32) -> ExtendedReal {
    assert!(n >= 1, "dimension must be positive");
    if n == 1 {
        return ExtendedReal::Infinite;
    }
    let n = n as f64;
    // (n+1 + sqrt(n^2+10n-7)) / (2(n-1)); the discriminant of the quadratic
    let disc = n * n + 10.0 * n - 7.0;
    ExtendedReal::Finite((n + 1.0 + disc.sqrt()) / (2.0 * (n - 1.0)))
}

pub fn fujita_exponent(n: u32) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    1.0 + 2.0 / n as f64
}

/// Scaling critical decay exponent `(n + 2 - mu - gamma) / 2`.
pub fn critical_decay(n: u32, gamma: f64, mu: f64) -> Result<f64> {
    check_gamma(n, gamma)?;
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(invalid("mu", format!("must be finite and >= 0, got {mu}")));
    }
    Ok((n as f64 + 2.0 - mu - gamma) / 2.0)
}

fn liouville_factor(t: f64, mu: f64) -> f64 {
    (1.0 + t).powf(mu / 2.0)
}

/// `u = (1+t)^{mu/2} v`.
pub fn liouville_forward(v: &RadialField, t: f64, mu: f64) -> RadialField {
    let factor = liouville_factor(t, mu);
    let values = v.values().iter().map(|x| factor * x).collect();
    RadialField::new(
        v.grid().clone(),
        values,
        t,
        FieldMeta {
            unknown: Unknown::U,
            mu,
        },
    )
    .expect("same grid and finite scaling")
}

/// `v = (1+t)^{-mu/2} u`.
pub fn liouville_inverse(u: &RadialField, t: f64, mu: f64) -> RadialField {
    let factor = liouville_factor(t, mu);
    let values = u.values().iter().map(|x| x / factor).collect();
    RadialField::new(
        u.grid().clone(),
        values,
        t,
        FieldMeta {
            unknown: Unknown::V,
            mu,
        },
    )
    .expect("same grid and finite scaling")
}

/// Power of `sigma` in `v_sigma(x,t) = sigma^{1+(n-gamma)/2} u(sigma x, sigma t)`.
pub fn scale_exponent(n: u32, gamma: f64) -> f64 {
    1.0 + (n as f64 - gamma) / 2.0
}

/// Rescales a sampled space-time field. Samples at `(r_i, t_k)` become
/// samples at `(r_i / sigma, t_k / sigma)` multiplied by the scaling power.
pub fn scale_transform(u: &SpaceTimeField, sigma: f64, n: u32, gamma: f64) -> Result<SpaceTimeField> {
    positive("sigma", sigma)?;
    let factor = sigma.powf(scale_exponent(n, gamma));
    let grid = u.grid().scaled(1.0 / sigma)?;
    let levels: Vec<Vec<f64>> = u
        .levels()
        .iter()
        .map(|level| level.iter().map(|x| factor * x).collect())
        .collect();
    SpaceTimeField::from_levels(grid, u.t0() / sigma, u.dt() / sigma, levels)
}
