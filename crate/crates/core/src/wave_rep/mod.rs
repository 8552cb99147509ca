//! Radial fields, Legendre/Chebyshev kernels, and the integral
//! representations of free waves and Duhamel terms.

mod field;
mod poly;
mod representation;

pub use field::{FieldMeta, RadialField, SpaceTimeField, Unknown};
pub use poly::{chebyshev_poly, delta_m, delta_m_with_cap, legendre_poly, region_delta, DELTA_M_CAP};
pub use representation::{
    duhamel_term_even, duhamel_term_odd, free_solution_u0, spherical_mean, Estimate,
    Representation, RepresentationSettings,
};
