//! The convolution as an abstract linear map on grid values, with a dense
//! implementation ([`KernelMatrix`]) and an `O(N)` one for the Newton
//! potential.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

// unused when std is in the build graph: its inherent float methods take over
#[allow(unused_imports)]
use num_traits::Float;

use super::grid::{GridLayout, RadialGrid};
use super::kernel::KernelMatrix;
use crate::error::{invalid, Result};

/// `values -> G_gamma(values)` on one grid.
pub trait ConvolutionOperator: Sync {
    fn grid(&self) -> &Arc<RadialGrid>;
    fn n(&self) -> u32;
    fn gamma(&self) -> f64;
    /// `out = G_gamma(values)` at the grid nodes.
    fn apply(&self, values: &[f64], out: &mut [f64]);
}

impl ConvolutionOperator for KernelMatrix {
    fn grid(&self) -> &Arc<RadialGrid> {
        KernelMatrix::grid(self)
    }
    fn n(&self) -> u32 {
        KernelMatrix::n(self)
    }
    fn gamma(&self) -> f64 {
        KernelMatrix::gamma(self)
    }
    fn apply(&self, values: &[f64], out: &mut [f64]) {
        self.apply_values(values, out)
    }
}

/// `n = 3`, `gamma = 1` on a uniform piecewise-linear grid, where
/// `K(r, rho) = 4 pi rho min(r, rho) / r`, so
/// `G(U)(r) = 4 pi (r^{-1} int_0^r rho^2 U + int_r^{r_max} rho U)`.
/// Both integrals of the linear interpolant are exact prefix sums.
#[derive(Debug, Clone)]
pub struct NewtonPotential {
    grid: Arc<RadialGrid>,
    // per element [a, b]: int rho^k phi_left, int rho^k phi_right for k = 1, 2
    w1: Vec<(f64, f64)>,
    w2: Vec<(f64, f64)>,
}

impl NewtonPotential {
    pub fn new(grid: impl Into<Arc<RadialGrid>>) -> Result<Self> {
        let grid = grid.into();
        match grid.layout() {
            GridLayout::Uniform { order: 1, .. } => {}
            other => {
                return Err(invalid(
                    "grid",
                    format!("the Newton potential needs a uniform linear grid, got {other:?}"),
                ))
            }
        }
        let nodes = grid.nodes();
        let mut w1 = Vec::with_capacity(nodes.len() - 1);
        let mut w2 = Vec::with_capacity(nodes.len() - 1);
        for e in nodes.windows(2) {
            let (a, b) = (e[0], e[1]);
            let h = b - a;
            // int_a^b rho^k (b - rho)/h and (rho - a)/h, exact
            let m = |k: i32| (b.powi(k + 1) - a.powi(k + 1)) / (k + 1) as f64;
            let right = |k: i32| (m(k + 1) - a * m(k)) / h;
            let left = |k: i32| (b * m(k) - m(k + 1)) / h;
            w1.push((left(1), right(1)));
            w2.push((left(2), right(2)));
        }
        Ok(Self { grid, w1, w2 })
    }
}

impl ConvolutionOperator for NewtonPotential {
    fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
    fn n(&self) -> u32 {
        3
    }
    fn gamma(&self) -> f64 {
        1.0
    }
    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let len = u.len();
        assert_eq!(len, self.grid.len(), "input length must match the grid");
        assert_eq!(out.len(), len, "output length must match the grid");
        let nodes = self.grid.nodes();
        // tail[i] = int_{r_i}^{r_max} rho U
        let mut tail = 0.0;
        out[len - 1] = 0.0;
        for i in (0..len - 1).rev() {
            let (l, r) = self.w1[i];
            tail += l * u[i] + r * u[i + 1];
            out[i] = tail;
        }
        let mut inner = 0.0;
        out[0] *= 4.0 * PI;
        for i in 1..len {
            let (l, r) = self.w2[i - 1];
            inner += l * u[i - 1] + r * u[i];
            out[i] = 4.0 * PI * (inner / nodes[i] + out[i]);
        }
    }
}
