//! The sequences `(a_j, b_j, c_j, d_j)` of the iteration argument, the
//! constants `C, D, B, eps_0`, the blow-up functional `K(t)` and the
//! resulting lifespan upper bound.
//!
//! `a_j, b_j, d_j` are exact rationals (the `f64` parameters are converted
//! without rounding). `c_j` involves `pi` and Gamma values through `C`, so
//! it is carried as `log c_j` in double precision, split into the part
//! proportional to `log c_1` and the remainder so that comparisons against
//! the induction bound do not lose digits to the `3^{j-1}` growth.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use num_bigint::BigInt;
use num_rational::BigRational;
// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exponents::ProblemSpec;
use crate::radial_kernel::{gamma_fn, unit_sphere_area};
use crate::wave_rep::region_delta;

const LN_3: f64 = 1.098_612_288_668_109_8;

/// Exact rational from a finite double.
pub fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| invalid("value", format!("{x} is not finite")))
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn pow3(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(3u8).pow(k))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parameters the sequences depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationParams {
    pub n: u32,
    pub gamma: f64,
    pub nu: f64,
    pub amplitude: f64,
    pub eps: f64,
}

impl IterationParams {
    pub fn from_spec(spec: &ProblemSpec) -> Self {
        Self {
            n: spec.n(),
            gamma: spec.gamma(),
            nu: spec.nu(),
            amplitude: spec.amplitude(),
            eps: spec.eps(),
        }
    }

    /// `c_1 = A eps / 8` (`A eps / 2` in one dimension).
    pub fn c1(&self) -> f64 {
        let denom = if self.n == 1 { 2.0 } else { 8.0 };
        self.amplitude * self.eps / denom
    }
}

/// The `j`-th member of the sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    j: u32,
    a: BigRational,
    b: BigRational,
    d: BigRational,
    /// `log c_j - 3^{j-1} log c_1`, independent of `c_1`.
    log_c_excess: f64,
    log_c1: f64,
    log_kernel_c: f64,
    params: IterationParams,
}

impl IterationState {
    /// `j = 1`: `a = 1`, `b = 1 + nu`, `c = c_1`, `d = 0`.
    pub fn initial(params: IterationParams, kernel_c: f64) -> Result<Self> {
        if params.n == 0 {
            return Err(invalid("n", "dimension must be positive"));
        }
        if !(kernel_c > 0.0) {
            return Err(invalid("C", format!("kernel constant must be > 0, got {kernel_c}")));
        }
        let c1 = params.c1();
        if !(c1 > 0.0 && c1.is_finite()) {
            return Err(invalid("c1", format!("A eps must be positive, got c1 = {c1}")));
        }
        Ok(Self {
            j: 1,
            a: BigRational::one(),
            b: BigRational::one() + exact(params.nu)?,
            d: BigRational::zero(),
            log_c_excess: 0.0,
            log_c1: c1.ln(),
            log_kernel_c: kernel_c.ln(),
            params,
        })
    }

    pub fn from_constants(constants: &BlowupConstants, params: IterationParams) -> Result<Self> {
        Self::initial(params, constants.kernel_c)
    }

    pub fn j(&self) -> u32 {
        self.j
    }
    pub fn a(&self) -> &BigRational {
        &self.a
    }
    pub fn b(&self) -> &BigRational {
        &self.b
    }
    pub fn d(&self) -> &BigRational {
        &self.d
    }
    pub fn params(&self) -> &IterationParams {
        &self.params
    }

    /// `log c_j`.
    pub fn log_c(&self) -> f64 {
        3f64.powi(self.j as i32 - 1) * self.log_c1 + self.log_c_excess
    }

    /// `log c_j - 3^{j-1} log c_1`.
    pub fn log_c_excess(&self) -> f64 {
        self.log_c_excess
    }

    /// One step of the recurrences.
    pub fn advance(&self) -> Result<Self> {
        let n = self.params.n as i64;
        let shift_a = rational(3 * n + 1, 2);
        let shift_b = rational(n + 3, 2) + exact(self.params.gamma)?;
        let three = BigRational::from_integer(BigInt::from(3));
        let a_next = &three * &self.a + &shift_a;
        let b_next = &three * &self.b + shift_b;
        let d_next = &three * &self.d + BigRational::one();
        // c_{j+1} = C c_j^3 / (8 (2 d_j + 1) a_{j+1}^2)
        let two_d_plus_one = to_f64(&(BigRational::from_integer(BigInt::from(2)) * &self.d + BigRational::one()));
        let log_factor = self.log_kernel_c - 3.0 * LN_2 - two_d_plus_one.ln() - 2.0 * to_f64(&a_next).ln();
        Ok(Self {
            j: self.j + 1,
            a: a_next,
            b: b_next,
            d: d_next,
            log_c_excess: 3.0 * self.log_c_excess + log_factor,
            log_c1: self.log_c1,
            log_kernel_c: self.log_kernel_c,
            params: self.params,
        })
    }

    /// The state at index `j` by repeated [`advance`](Self::advance).
    pub fn nth(params: IterationParams, kernel_c: f64, j: u32) -> Result<Self> {
        if j == 0 {
            return Err(invalid("j", "indices start at 1"));
        }
        let mut s = Self::initial(params, kernel_c)?;
        for _ in 1..j {
            s = s.advance()?;
        }
        Ok(s)
    }
}

/// Free-standing form of [`IterationState::advance`].
pub fn advance(state: &IterationState) -> Result<IterationState> {
    state.advance()
}

/// Closed forms of `(a_j, b_j, d_j)`.
pub fn closed_form(j: u32, params: &IterationParams) -> Result<(BigRational, BigRational, BigRational)> {
    if j == 0 {
        return Err(invalid("j", "indices start at 1"));
    }
    let n = params.n as i64;
    let p = pow3(j - 1);
    let four = BigRational::from_integer(BigInt::from(4));
    let a = &p * rational(3 * n + 5, 4) - rational(3 * n + 1, 4);
    let nu = exact(params.nu)?;
    let gamma = exact(params.gamma)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let b = &p * ((BigRational::from_integer(BigInt::from(7 + n)) + &four * nu + &two * &gamma) / &four)
        - (&two * gamma + BigRational::from_integer(BigInt::from(n + 3))) / &four;
    let d = (p - BigRational::one()) / two;
    Ok((a, b, d))
}

/// How the kernel constant `C` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelConstant {
    /// `n >= 3`: `C = C_0 C_1`.
    Product { c0: f64, c1: f64 },
    /// `n = 2`: `C = sqrt(2) C_0`.
    SqrtTwo { c0: f64 },
    /// `n = 1`: `C = 4` turns the one-dimensional recurrence
    /// `c^3 / (2 (3a+1)(3a+2)(2d+1))` into a lower bound of the same shape.
    OneDimensional,
}

/// `C_0 = 2^{3-n} omega_{n-1}`.
pub fn c0(n: u32) -> f64 {
    2f64.powi(3 - n as i32) * unit_sphere_area(n - 1)
}

/// `C_1 = 2^{(3n-5)/2} Gamma((n-1)/2) Gamma(n-1) / Gamma(3(n-1)/2)`, `n >= 3`.
pub fn c1_constant(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(invalid("n", "C_1 is defined for n >= 3"));
    }
    let nf = n as f64;
    Ok(2f64.powf((3.0 * nf - 5.0) / 2.0) * gamma_fn((nf - 1.0) / 2.0)? * gamma_fn(nf - 1.0)?
        / gamma_fn(3.0 * (nf - 1.0) / 2.0)?)
}

pub fn kernel_constant(n: u32) -> Result<(f64, KernelConstant)> {
    match n {
        0 => Err(invalid("n", "dimension must be positive")),
        1 => Ok((4.0, KernelConstant::OneDimensional)),
        2 => {
            let c0 = c0(2);
            Ok((2f64.sqrt() * c0, KernelConstant::SqrtTwo { c0 }))
        }
        _ => {
            let c0 = c0(n);
            let c1 = c1_constant(n)?;
            Ok((c0 * c1, KernelConstant::Product { c0, c1 }))
        }
    }
}

/// Constants of the blow-up argument for one problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupConstants {
    pub n: u32,
    pub kernel_c: f64,
    pub provenance: KernelConstant,
    /// `D = 6 C / (3n + 5)^2`.
    pub d: f64,
    /// `kappa = n - gamma - 2 nu`.
    pub kappa: f64,
    /// `c_1 / eps` (`A / 8`, or `A / 2` for `n = 1`).
    pub c1_per_eps: f64,
    /// `B = (D^{1/2} (c_1/eps) 3^{-9/4})^{-2/kappa}`.
    pub b: f64,
    /// Wedge constant `delta` (unused for `n = 1`).
    pub delta: f64,
    /// `max(R / delta, 1)` (`max(R, 1)` for `n = 1`).
    pub t_min: f64,
    /// Largest admissible `eps`: `B eps_0^{-2/kappa} = t_min`.
    pub eps0: f64,
}

impl BlowupConstants {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        spec.require_supercritical()?;
        let n = spec.n();
        let (kernel_c, provenance) = kernel_constant(n)?;
        let nf = n as f64;
        let d = 6.0 * kernel_c / (3.0 * nf + 5.0).powi(2);
        let kappa = spec.supercritical_gap();
        let c1_per_eps = IterationParams::from_spec(spec).c1() / spec.eps();
        let b = (d.sqrt() * c1_per_eps * (-2.25 * LN_3).exp()).powf(-2.0 / kappa);
        let (delta, t_min) = if n == 1 {
            (f64::INFINITY, spec.inner_radius().max(1.0))
        } else {
            let delta = region_delta(n);
            (delta, (spec.inner_radius() / delta).max(1.0))
        };
        let eps0 = (t_min / b).powf(-kappa / 2.0);
        Ok(Self {
            n,
            kernel_c,
            provenance,
            d,
            kappa,
            c1_per_eps,
            b,
            delta,
            t_min,
            eps0,
        })
    }

    /// The exponent `-2 / kappa` of the lifespan bound.
    pub fn lifespan_exponent(&self) -> f64 {
        -2.0 / self.kappa
    }
}

/// `D^{-1/2} exp(3^{j-1} log(c_1 3^{-9/4} D^{1/2}))`, returned as a logarithm.
pub fn c_lower_bound(j: u32, constants: &BlowupConstants, c1: f64) -> Result<f64> {
    if j == 0 {
        return Err(invalid("j", "indices start at 1"));
    }
    if !(c1 > 0.0 && constants.d > 0.0) {
        return Err(invalid("c1", "c_1 and D must be positive"));
    }
    let half_log_d = 0.5 * constants.d.ln();
    Ok(-half_log_d + 3f64.powi(j as i32 - 1) * (c1.ln() - 2.25 * LN_3 + half_log_d))
}

/// `log c_j - c_lower_bound(j)` computed without the common `3^{j-1} log c_1` term.
pub fn induction_slack(state: &IterationState, constants: &BlowupConstants) -> f64 {
    let half_log_d = 0.5 * constants.d.ln();
    let p = 3f64.powi(state.j() as i32 - 1);
    state.log_c_excess() - (-half_log_d + p * (-2.25 * LN_3 + half_log_d))
}

/// `K(t) = log(eps D^{1/2} (c_1/eps) 3^{-9/4} t^{kappa/2})`.
#[allow(non_snake_case)]
pub fn blowup_functional_K(t: f64, eps: f64, constants: &BlowupConstants) -> Result<f64> {
    if !(t >= constants.t_min) {
        return Err(Error::Hypothesis {
            hypothesis: "t >= max(R/delta, 1)",
            detail: format!("t = {t} is below {}", constants.t_min),
        });
    }
    if !(eps > 0.0) {
        return Err(invalid("eps", "must be positive"));
    }
    Ok(eps.ln() + 0.5 * constants.d.ln() + constants.c1_per_eps.ln() - 2.25 * LN_3
        + 0.5 * constants.kappa * t.ln())
}

/// `T_eps <= B eps^{-2/kappa}`.
pub fn lifespan_upper_bound(spec: &ProblemSpec, constants: &BlowupConstants) -> Result<f64> {
    spec.require_supercritical()?;
    if spec.eps() > constants.eps0 {
        return Err(Error::Hypothesis {
            hypothesis: "eps <= eps_0",
            detail: format!("eps = {} exceeds eps_0 = {}", spec.eps(), constants.eps0),
        });
    }
    Ok(constants.b * spec.eps().powf(-2.0 / constants.kappa))
}

/// Whether `(r, t)` lies in the wedge `r - t >= max(R, delta t)`
/// (`x - t >= R` for `n = 1`).
pub fn in_region(r: f64, t: f64, spec: &ProblemSpec, delta: f64) -> bool {
    if spec.n() == 1 {
        r - t >= spec.inner_radius()
    } else {
        r - t >= spec.inner_radius().max(delta * t)
    }
}

/// `A eps t / (8 (1 + r + t)^{1+nu})`, or `A eps t / (2 (1 + x + t)^{1+nu})` for `n = 1`.
pub fn first_step_lower_bound(r: f64, t: f64, spec: &ProblemSpec) -> Result<f64> {
    let delta = if spec.n() == 1 { 0.0 } else { region_delta(spec.n()) };
    if !(t >= 0.0) || !in_region(r, t, spec, delta) {
        return Err(Error::Hypothesis {
            hypothesis: "(r, t) in Sigma",
            detail: format!("({r}, {t}) lies outside the wedge"),
        });
    }
    let params = IterationParams::from_spec(spec);
    Ok(params.c1() * t / (1.0 + r + t).powf(1.0 + spec.nu()))
}

/// Lower bound for `G_gamma(u^2)(lambda, s)` implied by
/// `u >= c t^a (r - t - max(R, delta t))^d / (1 + r + t)^b` on the wedge.
/// For `n = 1` the one-dimensional bound
/// `c^2 s^{2a} (y - s - R)^{2d+1} / ((2d+1)(1 + y + s)^{2b+gamma})` is used.
pub fn gconv_lower_bound(
    lambda: f64,
    s: f64,
    state: &IterationState,
    constants: &BlowupConstants,
    spec: &ProblemSpec,
) -> Result<f64> {
    let n = spec.n();
    let shift = if n == 1 {
        spec.inner_radius()
    } else {
        spec.inner_radius().max(constants.delta * s)
    };
    if !(s >= 0.0) || lambda - s < shift {
        return Err(Error::Hypothesis {
            hypothesis: "lambda - s >= max(R, delta s)",
            detail: format!("lambda = {lambda}, s = {s}"),
        });
    }
    let a = to_f64(state.a());
    let b = to_f64(state.b());
    let d = to_f64(state.d());
    let gap = lambda - s - shift;
    let gamma = spec.gamma();
    if s == 0.0 && a > 0.0 {
        return Ok(0.0);
    }
    let log_c = state.log_c();
    let log_value = if n == 1 {
        2.0 * log_c + 2.0 * a * s.ln() + (2.0 * d + 1.0) * gap.ln()
            - (2.0 * d + 1.0).ln()
            - (2.0 * b + gamma) * (1.0 + lambda + s).ln()
    } else {
        let nf = n as f64;
        constants.kernel_c.ln() + 2.0 * log_c + (2.0 * a + 1.5 * (nf - 1.0)) * s.ln()
            + (2.0 * d + 1.0) * gap.ln()
            - (2.0 * d + 1.0).ln()
            - gamma * LN_2
            - (0.5 * (nf - 1.0) + gamma) * lambda.ln()
            - 2.0 * b * (1.0 + s + lambda).ln()
    };
    Ok(log_value.exp())
}

/// One row of the sequence report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub j: u32,
    pub a_j: String,
    pub b_j: String,
    pub d_j: String,
    pub log_c_j: f64,
    pub log_bound: f64,
    pub closed_form_matches: bool,
}

/// Table of `(j, a_j, b_j, d_j, log c_j, log bound)` for `1 <= j <= jmax`.
pub fn sequence_report(spec: &ProblemSpec, jmax: u32) -> Result<Vec<ReportRow>> {
    let constants = BlowupConstants::new(spec)?;
    let params = IterationParams::from_spec(spec);
    let mut state = IterationState::initial(params, constants.kernel_c)?;
    let mut rows = Vec::with_capacity(jmax as usize);
    for j in 1..=jmax {
        if j > 1 {
            state = state.advance()?;
        }
        let (a, b, d) = closed_form(j, &params)?;
        rows.push(ReportRow {
            j,
            a_j: a.to_string(),
            b_j: b.to_string(),
            d_j: d.to_string(),
            log_c_j: state.log_c(),
            log_bound: c_lower_bound(j, &constants, params.c1())?,
            closed_form_matches: a == *state.a() && b == *state.b() && d == *state.d(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: u32, gamma: f64, nu: f64) -> IterationParams {
        IterationParams {
            n,
            gamma,
            nu,
            amplitude: 8.0,
            eps: 1.0,
        }
    }

    #[test]
    fn recurrence_examples() {
        let p = params(3, 1.0, 0.5);
        let s = IterationState::initial(p, 1.0).unwrap();
        let s2 = s.advance().unwrap();
        assert_eq!(*s2.a(), rational(8, 1));
        assert_eq!(*s2.d(), rational(1, 1));
        assert_eq!(*s2.b(), rational(17, 2));
        assert_eq!(closed_form(1, &p).unwrap(), (rational(1, 1), rational(3, 2), rational(0, 1)));
        assert_eq!(closed_form(2, &p).unwrap().0, rational(8, 1));
        assert_eq!(closed_form(4, &p).unwrap().2, rational(13, 1));
    }

    #[test]
    fn kernel_constants() {
        // n = 3: C_0 = 2 pi, C_1 = 2^2 Gamma(1) Gamma(2) / Gamma(3) = 2
        let (c, prov) = kernel_constant(3).unwrap();
        assert!((c - 4.0 * core::f64::consts::PI).abs() < 1e-12);
        assert!(matches!(prov, KernelConstant::Product { .. }));
        let (c2, _) = kernel_constant(2).unwrap();
        assert!((c2 - 2f64.sqrt() * 2.0 * 2.0).abs() < 1e-12);
        assert_eq!(kernel_constant(1).unwrap().0, 4.0);
    }

    #[test]
    fn lifespan_bound_examples() {
        let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 1e-3).unwrap();
        let k = BlowupConstants::new(&spec).unwrap();
        assert_eq!(k.lifespan_exponent(), -2.0);
        let t1 = lifespan_upper_bound(&spec, &k).unwrap();
        let t2 = lifespan_upper_bound(&spec.with_eps(5e-4).unwrap(), &k).unwrap();
        assert!((t2 / t1 - 4.0).abs() < 1e-12);
        let at_eps0 = lifespan_upper_bound(&spec.with_eps(k.eps0).unwrap(), &k).unwrap();
        assert!(at_eps0 >= k.t_min * (1.0 - 1e-12));
        assert!(lifespan_upper_bound(&spec.with_eps(2.0 * k.eps0).unwrap(), &k).is_err());
        let one = ProblemSpec::blowup(1, 0.5, 0.1, 1.0, 1e-3).unwrap();
        let k1 = BlowupConstants::new(&one).unwrap();
        assert!((k1.lifespan_exponent() + 20.0 / 3.0).abs() < 1e-12);
        assert_eq!(k1.d, 3.0 / 8.0);
    }

    #[test]
    fn functional_root_is_the_bound() {
        let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 1e-3).unwrap();
        let k = BlowupConstants::new(&spec).unwrap();
        let t = lifespan_upper_bound(&spec, &k).unwrap();
        let v = blowup_functional_K(t, spec.eps(), &k).unwrap();
        assert!(v.abs() < 1e-12);
        let v2 = blowup_functional_K(2.0 * t, spec.eps(), &k).unwrap();
        assert!((v2 - v - 0.5 * k.kappa * LN_2).abs() < 1e-12);
        assert!(blowup_functional_K(0.5 * k.t_min, spec.eps(), &k).is_err());
    }

    #[test]
    fn first_step_examples() {
        let spec = ProblemSpec::new(3, 1.0, 2.0, 1.0, 8.0, 1.0, 1.0).unwrap();
        assert_eq!(first_step_lower_bound(5.0, 0.0, &spec).unwrap(), 0.0);
        let v = first_step_lower_bound(10.0, 1.0, &spec).unwrap();
        assert!((v - 1.0 / 144.0).abs() < 1e-15);
        assert!(first_step_lower_bound(1.5, 1.0, &spec).is_err());
    }

    #[test]
    fn gconv_vanishes_on_edges() {
        let spec = ProblemSpec::blowup(3, 1.0, 0.5, 1.0, 0.1).unwrap();
        let k = BlowupConstants::new(&spec).unwrap();
        let st = IterationState::from_constants(&k, IterationParams::from_spec(&spec)).unwrap();
        assert_eq!(gconv_lower_bound(5.0, 0.0, &st, &k, &spec).unwrap(), 0.0);
        let s = 0.5;
        let edge = s + spec.inner_radius().max(k.delta * s);
        assert_eq!(gconv_lower_bound(edge, s, &st, &k, &spec).unwrap(), 0.0);
        assert!(gconv_lower_bound(edge - 0.1, s, &st, &k, &spec).is_err());
    }

    #[test]
    fn report_rows() {
        let spec = ProblemSpec::blowup(3, 1.0, 0.5, 8.0, 1.0).unwrap();
        let rows = sequence_report(&spec, 6).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.closed_form_matches));
        assert_eq!(rows[1].a_j, "8");
        assert_eq!(rows[1].b_j, "17/2");
    }

    proptest! {
        #[test]
        fn closed_form_equals_iteration(n in 1u32..9, g in 0.01f64..0.99, nu in 0.0f64..3.0, j in 1u32..25) {
            let p = params(n, g * n as f64, nu);
            let s = IterationState::nth(p, 1.0, j).unwrap();
            let (a, b, d) = closed_form(j, &p).unwrap();
            prop_assert_eq!(&a, s.a());
            prop_assert_eq!(&b, s.b());
            prop_assert_eq!(&d, s.d());
        }

        #[test]
        fn induction_bound_holds(n in 1u32..8, g in 0.05f64..0.95, j in 1u32..21, amp in 0.1f64..10.0) {
            let gamma = g * n as f64;
            let nu = 0.25 * (n as f64 - gamma);
            let spec = ProblemSpec::blowup(n, gamma, nu, amp, 0.5).unwrap();
            let k = BlowupConstants::new(&spec).unwrap();
            let s = IterationState::nth(IterationParams::from_spec(&spec), k.kernel_c, j).unwrap();
            prop_assert!(induction_slack(&s, &k) >= -1e-12);
        }

        #[test]
        fn functional_is_increasing(t in 1.0f64..1e6, f in 1.01f64..10.0) {
            let spec = ProblemSpec::blowup(4, 1.5, 0.5, 1.0, 1e-2).unwrap();
            let k = BlowupConstants::new(&spec).unwrap();
            let t = t.max(k.t_min);
            prop_assert!(blowup_functional_K(t * f, 1e-2, &k).unwrap() > blowup_functional_K(t, 1e-2, &k).unwrap());
        }
    }
}
