//! Special functions, quadrature, radial grids and the radial convolution
//! operator `G_gamma`.

mod grid;
mod kernel;
mod operator;
pub mod quadrature;
mod special;

pub use grid::{Element, GridLayout, RadialGrid};
pub use kernel::{
    apply_convolution, build_kernel_matrix, build_kernel_matrix_with, h_kernel,
    john_sphere_mean, tail_bound, KernelDiagnostics, KernelMatrix, KernelRow, QuadratureSettings,
    RadialConvolution, SphereMeans,
};
pub use operator::{ConvolutionOperator, NewtonPotential};
pub use special::{beta_fn, gamma_fn, ln_gamma, unit_sphere_area, weighted_interval_integral};
