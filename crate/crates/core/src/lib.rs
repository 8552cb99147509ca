#![no_std]
//! Numerical core for radial wave equations with a Hartree-type cubic
//! convolution nonlinearity `(|x|^{-gamma} * u^2) u` and scale-invariant
//! damping: critical exponents, the radial convolution operator, integral
//! representations, the iteration sequences behind the blow-up bound, and a
//! finite-difference solver with blow-up detection.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exponents;
pub mod iteration;
pub mod radial_kernel;
pub mod solver;
pub mod wave_rep;

pub use error::{Error, Result};
