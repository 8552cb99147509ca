use alloc::format;
use core::f64::consts::PI;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Result};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// Euler's Gamma function for `x > 0`.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("gamma_fn", format!("requires x > 0, got {x}")));
    }
    Ok(gamma_positive(x))
}

pub(crate) fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the small-argument branch accurate
        return PI / ((PI * x).sin() * gamma_positive(1.0 - x));
    }
    if x == x.floor() && x <= 171.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("ln_gamma", format!("requires x > 0, got {x}")));
    }
    Ok(ln_gamma_positive(x))
}

pub(crate) fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    if x < 20.0 {
        return gamma_positive(x).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// `B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q)`.
pub fn beta_fn(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) || !p.is_finite() || !q.is_finite() {
        return Err(domain(
            "beta_fn",
            format!("requires p, q > 0, got ({p}, {q})"),
        ));
    }
    if p + q < 150.0 {
        Ok(gamma_positive(p) * gamma_positive(q) / gamma_positive(p + q))
    } else {
        Ok((ln_gamma_positive(p) + ln_gamma_positive(q) - ln_gamma_positive(p + q)).exp())
    }
}

/// Area of the unit sphere in `R^n`, `2 pi^{n/2} / Gamma(n/2)`.
pub fn unit_sphere_area(n: u32) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_positive(half)
}

/// `int_alpha^beta (z - alpha)^{p-1} (beta - z)^{q-1} dz = (beta - alpha)^{p+q-1} B(p, q)`.
pub fn weighted_interval_integral(alpha: f64, beta: f64, p: f64, q: f64) -> Result<f64> {
    if !(alpha < beta) {
        return Err(domain(
            "weighted_interval_integral",
            format!("requires alpha < beta, got [{alpha}, {beta}]"),
        ));
    }
    Ok((beta - alpha).powf(p + q - 1.0) * beta_fn(p, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert!(rel(gamma_fn(1.5).unwrap(), PI.sqrt() / 2.0) < 1e-14);
        assert!(rel(gamma_fn(0.1).unwrap(), 9.513_507_698_668_732) < 1e-13);
        assert!(rel(gamma_fn(10.3).unwrap(), 716_430.689_062_376_5) < 1e-12);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        let mut x = 0.05;
        while x < 30.0 {
            let lhs = gamma_positive(x + 1.0);
            let rhs = x * gamma_positive(x);
            assert!(rel(lhs, rhs) < 1e-13, "x = {x}");
            assert!((ln_gamma_positive(x) - gamma_positive(x).ln()).abs() < 1e-12 * (1.0 + gamma_positive(x).ln().abs()));
            x += 0.37;
        }
    }

    #[test]
    fn beta_values() {
        assert!(rel(beta_fn(1.0, 1.0).unwrap(), 1.0) < 1e-15);
        assert!(rel(beta_fn(0.5, 0.5).unwrap(), PI) < 1e-14);
        assert!(rel(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-15);
        assert!(rel(beta_fn(100.0, 90.0).unwrap(), (ln_gamma_positive(100.0) + ln_gamma_positive(90.0) - ln_gamma_positive(190.0)).exp()) < 1e-10);
        assert!(beta_fn(0.0, 1.0).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert!(rel(unit_sphere_area(2), 2.0 * PI) < 1e-15);
        assert!(rel(unit_sphere_area(3), 4.0 * PI) < 1e-15);
        assert!(rel(unit_sphere_area(4), 2.0 * PI * PI) < 1e-15);
        assert!(rel(unit_sphere_area(1), 2.0) < 1e-15);
        // odd/even closed forms
        assert!(rel(unit_sphere_area(5), 2.0 * (2.0 * PI).powi(2) / 3.0) < 1e-14);
        assert!(rel(unit_sphere_area(6), PI.powi(3)) < 1e-14);
    }

    #[test]
    fn interval_integral_examples() {
        assert_eq!(weighted_interval_integral(0.0, 1.0, 1.0, 1.0).unwrap(), 1.0);
        // n = 3, rho = 1, lambda arbitrary: (2 rho)^{(3n-5)/2} Gamma(1)Gamma(2)/Gamma(3) = 2
        let lam = 2.7;
        let v = weighted_interval_integral(lam - 1.0, lam + 1.0, 1.0, 2.0).unwrap();
        assert!(rel(v, 2.0) < 1e-15);
        assert!(weighted_interval_integral(1.0, 1.0, 1.0, 1.0).is_err());
    }
}
