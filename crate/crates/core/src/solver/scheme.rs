//! Explicit leapfrog scheme for the radial wave operator with the Hartree
//! source, in either the undamped (`u`) or the damped (`v`, `mu = 2`) form.

use alloc::boxed::Box;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use crate::error::{invalid, Error, Result};
use crate::exponents::ProblemSpec;
use crate::radial_kernel::{ConvolutionOperator, GridLayout, KernelMatrix, RadialGrid};
use crate::wave_rep::{FieldMeta, RadialField, Representation, RepresentationSettings, Unknown};

/// Which equation is marched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// `u_tt - Delta u = (1+t)^{-2} (V * u^2) u`.
    Undamped,
    /// `v_tt - Delta v + 2/(1+t) v_t = (V * v^2) v`.
    Damped,
}

impl Formulation {
    pub fn from_meta(meta: FieldMeta) -> Result<Self> {
        match meta.unknown {
            Unknown::U => Ok(Formulation::Undamped),
            Unknown::V if meta.mu == 2.0 => Ok(Formulation::Damped),
            Unknown::V => Err(invalid(
                "mu",
                format!("only mu = 2 is simulated, got {}", meta.mu),
            )),
        }
    }

    pub fn meta(self) -> FieldMeta {
        match self {
            Formulation::Undamped => FieldMeta {
                unknown: Unknown::U,
                mu: 2.0,
            },
            Formulation::Damped => FieldMeta {
                unknown: Unknown::V,
                mu: 2.0,
            },
        }
    }
}

/// Radial profile of the second datum `g` (the first datum `f` is zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    /// `A (1 + r)^{-(1 + nu)}`, the equality case of the decay hypothesis.
    SlowDecay,
    /// `A exp(-(r / width)^2)`.
    Gaussian { width: f64 },
    /// `A (1 + r)^{-(1 + nu)} (1 - depth (1 - r/radius)_+^2)`: negative
    /// near the origin when `depth > 1`.
    SignChange { radius: f64, depth: f64 },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::SlowDecay
    }
}

impl InitialData {
    pub fn g(&self, spec: &ProblemSpec, r: f64) -> f64 {
        let a = spec.amplitude();
        match *self {
            InitialData::SlowDecay => a * (1.0 + r).powf(-(1.0 + spec.nu())),
            InitialData::Gaussian { width } => a * (-(r / width).powi(2)).exp(),
            InitialData::SignChange { radius, depth } => {
                let bump = (1.0 - r / radius).max(0.0);
                a * (1.0 + r).powf(-(1.0 + spec.nu())) * (1.0 - depth * bump * bump)
            }
        }
    }

    pub fn sup(&self, spec: &ProblemSpec) -> f64 {
        match *self {
            InitialData::SignChange { depth, .. } => spec.amplitude() * (depth - 1.0).abs().max(1.0),
            _ => spec.amplitude(),
        }
    }
}

/// Spacing of a uniform piecewise-linear grid, or an error.
pub fn uniform_spacing(grid: &RadialGrid) -> Result<f64> {
    match grid.layout() {
        GridLayout::Uniform { dr, order: 1 } => Ok(dr),
        other => Err(invalid(
            "grid",
            format!("finite differences need a uniform linear grid, got {other:?}"),
        )),
    }
}

/// `u_rr + (n-1)/r u_r` by central differences, `2n (u_1 - u_0)/dr^2` at
/// the origin (even reflection plus L'Hopital). The last node is a
/// boundary node and is left at zero.
pub fn radial_laplacian(n: u32, dr: f64, u: &[f64], out: &mut [f64]) {
    let len = u.len();
    let inv2 = 1.0 / (dr * dr);
    let nm1 = n as f64 - 1.0;
    out[0] = 2.0 * n as f64 * (u[1] - u[0]) * inv2;
    for i in 1..len - 1 {
        let second = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv2;
        let first = (u[i + 1] - u[i - 1]) / (2.0 * i as f64 * dr * dr);
        out[i] = second + nm1 * first;
    }
    out[len - 1] = 0.0;
}

/// State of a leapfrog march on a uniform grid.
pub struct Solver<'a> {
    n: u32,
    formulation: Formulation,
    kernel: Option<&'a dyn ConvolutionOperator>,
    grid: Arc<RadialGrid>,
    dr: f64,
    dt: f64,
    t: f64,
    steps: usize,
    prev: Vec<f64>,
    curr: Vec<f64>,
    boundary: Box<dyn Fn(f64) -> f64 + 'a>,
    lap: Vec<f64>,
    src: Vec<f64>,
    sq: Vec<f64>,
}

impl<'a> Solver<'a> {
    /// Starts from position `u(0)` and velocity `u_t(0)`; the first level
    /// comes from a third-order Taylor step. `kernel = None` switches the
    /// source off. `boundary(t)` supplies the Dirichlet value at `r_max`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        grid: Arc<RadialGrid>,
        n: u32,
        formulation: Formulation,
        kernel: Option<&'a dyn ConvolutionOperator>,
        dt: f64,
        position: &[f64],
        velocity: &[f64],
        boundary: Box<dyn Fn(f64) -> f64 + 'a>,
    ) -> Result<Self> {
        let dr = uniform_spacing(&grid)?;
        let len = grid.len();
        if len < 3 {
            return Err(invalid("grid", "need at least three nodes"));
        }
        if position.len() != len || velocity.len() != len {
            return Err(Error::GridMismatch(format!(
                "initial data of length {}/{} for {len} nodes",
                position.len(),
                velocity.len()
            )));
        }
        if let Some(k) = kernel {
            if k.grid().nodes() != grid.nodes() {
                return Err(Error::GridMismatch("kernel matrix built on another grid".into()));
            }
            if k.n() != n {
                return Err(invalid("n", format!("kernel is for n = {}, solver for n = {n}", k.n())));
            }
        }
        if !(dt > 0.0 && dt <= super::config::MAX_CFL * dr * (1.0 + 1e-12)) {
            return Err(Error::Config(format!("dt = {dt} violates dt <= 0.9 dr = {}", 0.9 * dr)));
        }
        let mut s = Self {
            n,
            formulation,
            kernel,
            grid,
            dr,
            dt,
            t: 0.0,
            steps: 0,
            prev: position.to_vec(),
            curr: vec![0.0; len],
            boundary,
            lap: vec![0.0; len],
            src: vec![0.0; len],
            sq: vec![0.0; len],
        };
        s.start(velocity);
        Ok(s)
    }

    fn source(&mut self, which_prev: bool, t: f64) {
        let u = if which_prev { &self.prev } else { &self.curr };
        match self.kernel {
            None => self.src.iter_mut().for_each(|v| *v = 0.0),
            Some(k) => {
                for (q, &x) in self.sq.iter_mut().zip(u) {
                    *q = x * x;
                }
                k.apply(&self.sq, &mut self.src);
                let factor = match self.formulation {
                    Formulation::Undamped => 1.0 / ((1.0 + t) * (1.0 + t)),
                    Formulation::Damped => 1.0,
                };
                for (s, &x) in self.src.iter_mut().zip(u) {
                    *s *= factor * x;
                }
            }
        }
    }

    fn start(&mut self, velocity: &[f64]) {
        let dt = self.dt;
        let len = self.prev.len();
        radial_laplacian(self.n, self.dr, &self.prev, &mut self.lap);
        self.source(true, 0.0);
        let mut lap_v = vec![0.0; len];
        radial_laplacian(self.n, self.dr, velocity, &mut lap_v);
        for i in 0..len {
            let (u0, u1) = (self.prev[i], velocity[i]);
            let acc = self.lap[i] + self.src[i];
            self.curr[i] = match self.formulation {
                Formulation::Undamped => u0 + dt * u1 + 0.5 * dt * dt * acc + dt * dt * dt / 6.0 * lap_v[i],
                Formulation::Damped => {
                    let utt = acc - 2.0 * u1;
                    let uttt = lap_v[i] + 2.0 * u1 - 2.0 * utt;
                    u0 + dt * u1 + 0.5 * dt * dt * utt + dt * dt * dt / 6.0 * uttt
                }
            };
        }
        self.curr[len - 1] = (self.boundary)(dt);
        self.t = dt;
        self.steps = 1;
    }

    /// Advances one time step.
    pub fn advance(&mut self) {
        let dt = self.dt;
        let t = self.t;
        let len = self.curr.len();
        radial_laplacian(self.n, self.dr, &self.curr, &mut self.lap);
        self.source(false, t);
        let dt2 = dt * dt;
        match self.formulation {
            Formulation::Undamped => {
                for i in 0..len - 1 {
                    let next = 2.0 * self.curr[i] - self.prev[i] + dt2 * (self.lap[i] + self.src[i]);
                    self.prev[i] = next;
                }
            }
            Formulation::Damped => {
                let damp = dt / (1.0 + t);
                for i in 0..len - 1 {
                    let rhs = 2.0 * self.curr[i] - (1.0 - damp) * self.prev[i]
                        + dt2 * (self.lap[i] + self.src[i]);
                    self.prev[i] = rhs / (1.0 + damp);
                }
            }
        }
        self.t = t + dt;
        self.prev[len - 1] = (self.boundary)(self.t);
        core::mem::swap(&mut self.prev, &mut self.curr);
        self.steps += 1;
    }

    pub fn time(&self) -> f64 {
        self.t
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn dr(&self) -> f64 {
        self.dr
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
    pub fn formulation(&self) -> Formulation {
        self.formulation
    }
    pub fn current(&self) -> &[f64] {
        &self.curr
    }
    pub fn previous(&self) -> &[f64] {
        &self.prev
    }

    /// Largest `|u|`, or `inf` if any value is not finite.
    pub fn sup_norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        for v in &self.curr {
            if !v.is_finite() {
                return f64::INFINITY;
            }
            m = m.max(v.abs());
        }
        m
    }

    pub fn field(&self) -> Result<RadialField> {
        RadialField::new(self.grid.clone(), self.curr.clone(), self.t, self.formulation.meta())
    }
}

/// Dirichlet value at `r_max`: the free solution of the data, divided by
/// `1 + t` for the damped unknown.
pub fn free_boundary(
    spec: ProblemSpec,
    data: InitialData,
    formulation: Formulation,
    r_max: f64,
) -> Result<Box<dyn Fn(f64) -> f64>> {
    let rep = Representation::new(spec.n(), RepresentationSettings::default())?;
    Ok(Box::new(move |t: f64| {
        let u = rep.free_solution(&|r| data.g(&spec, r), spec.eps(), r_max, t).value;
        match formulation {
            Formulation::Undamped => u,
            Formulation::Damped => u / (1.0 + t),
        }
    }))
}

/// One leapfrog step `u(t - dt), u(t) -> u(t + dt)` for the default data.
/// The formulation is read from the field metadata. Non-finite results are
/// returned as a blow-up signal (`Error::Domain`) rather than a panic.
pub fn step(
    u_prev: &RadialField,
    u_curr: &RadialField,
    kernel: &KernelMatrix,
    spec: &ProblemSpec,
    config: &SolverConfig,
) -> Result<RadialField> {
    config.validate(spec)?;
    let grid = u_curr.grid();
    if u_prev.grid().nodes() != grid.nodes() || kernel.grid().nodes() != grid.nodes() {
        return Err(Error::GridMismatch("fields and kernel must share one grid".into()));
    }
    let dr = uniform_spacing(grid)?;
    if (dr - config.dr).abs() > 1e-12 * dr {
        return Err(Error::GridMismatch(format!("grid spacing {dr} differs from config dr {}", config.dr)));
    }
    let formulation = Formulation::from_meta(u_curr.meta())?;
    let dt = u_curr.time() - u_prev.time();
    if !(dt > 0.0) || (dt - config.time_step()).abs() > 1e-9 * dt {
        return Err(invalid(
            "u_prev",
            format!("time levels are {dt} apart, configured step is {}", config.time_step()),
        ));
    }
    let t = u_curr.time();
    let boundary = free_boundary(*spec, InitialData::SlowDecay, formulation, grid.r_max())?;
    let len = grid.len();
    let mut lap = vec![0.0; len];
    radial_laplacian(spec.n(), dr, u_curr.values(), &mut lap);
    let sq: Vec<f64> = u_curr.values().iter().map(|x| x * x).collect();
    let mut conv = vec![0.0; len];
    kernel.apply_values(&sq, &mut conv);
    let (up, uc) = (u_prev.values(), u_curr.values());
    let mut next = vec![0.0; len];
    let dt2 = dt * dt;
    for i in 0..len - 1 {
        next[i] = match formulation {
            Formulation::Undamped => {
                2.0 * uc[i] - up[i] + dt2 * (lap[i] + conv[i] * uc[i] / ((1.0 + t) * (1.0 + t)))
            }
            Formulation::Damped => {
                let damp = dt / (1.0 + t);
                (2.0 * uc[i] - (1.0 - damp) * up[i] + dt2 * (lap[i] + conv[i] * uc[i])) / (1.0 + damp)
            }
        };
    }
    next[len - 1] = boundary(t + dt);
    if let Some(i) = next.iter().position(|v| !v.is_finite()) {
        return Err(crate::error::domain(
            "step",
            format!("non-finite value at r = {} (blow-up)", grid.nodes()[i]),
        ));
    }
    RadialField::new(grid.clone(), next, t + dt, u_curr.meta())
}
