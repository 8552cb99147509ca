use alloc::format;

use crate::error::{domain, Result};

fn check_unit(func: &'static str, z: f64) -> Result<f64> {
    if z.is_nan() || z.abs() > 1.0 + 1e-12 {
        return Err(domain(func, format!("|z| <= 1 required, got {z}")));
    }
    Ok(z.clamp(-1.0, 1.0))
}

/// Legendre polynomial `P_k(z)` by the three-term recurrence.
pub fn legendre_poly(k: u32, z: f64) -> Result<f64> {
    let z = check_unit("legendre_poly", z)?;
    Ok(legendre_unchecked(k, z))
}

pub(crate) fn legendre_unchecked(k: u32, z: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => z,
        _ => {
            let (mut p0, mut p1) = (1.0, z);
            for j in 1..k {
                let jf = j as f64;
                let p2 = ((2.0 * jf + 1.0) * z * p1 - jf * p0) / (jf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            p1
        }
    }
}

/// Chebyshev polynomial of the first kind, `T_k(z) = cos(k arccos z)`.
pub fn chebyshev_poly(k: u32, z: f64) -> Result<f64> {
    let z = check_unit("chebyshev_poly", z)?;
    Ok(chebyshev_unchecked(k, z))
}

pub(crate) fn chebyshev_unchecked(k: u32, z: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => z,
        _ => {
            let (mut t0, mut t1) = (1.0, z);
            for _ in 1..k {
                let t2 = 2.0 * z * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    }
}

/// Default value returned when `min(P_{m-1}, T_{m-1}) >= 1/2` holds on all
/// of `(0, 1]` (only `m = 1`).
pub const DELTA_M_CAP: f64 = 1.0;

/// `delta_m` with the default cap, see [`delta_m_with_cap`].
pub fn delta_m(m: u32) -> f64 {
    delta_m_with_cap(m, DELTA_M_CAP)
}

/// Largest `delta_m` with `min(P_{m-1}(z), T_{m-1}(z)) >= 1/2` on
/// `[1/(1+delta_m), 1]`.
///
/// The crossing `z*` is located by a downward scan from `z = 1` followed by
/// bisection; the returned value is `1/z* - 1` computed from a `z*` nudged
/// upward, so it errs on the safe (smaller) side.
pub fn delta_m_with_cap(m: u32, cap: f64) -> f64 {
    assert!(m >= 1, "m must be positive");
    let k = m - 1;
    let f = |z: f64| legendre_unchecked(k, z).min(chebyshev_unchecked(k, z)) - 0.5;
    const SCAN: usize = 20_000;
    let mut hi = 1.0;
    let mut lo = None;
    for i in 1..=SCAN {
        let z = 1.0 - i as f64 / SCAN as f64;
        if z <= 0.0 {
            break;
        }
        if f(z) < 0.0 {
            lo = Some(z);
            break;
        }
        hi = z;
    }
    let Some(mut lo) = lo else {
        return cap;
    };
    // f(lo) < 0 <= f(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z_star = hi * (1.0 + 4.0 * f64::EPSILON);
    1.0 / z_star - 1.0
}

/// The wedge constant `delta = 2 / delta_m` for dimension `n >= 2`
/// (`m = floor(n / 2)`).
pub fn region_delta(n: u32) -> f64 {
    assert!(n >= 2, "the wedge constant is defined for n >= 2");
    2.0 / delta_m(n / 2)
}
