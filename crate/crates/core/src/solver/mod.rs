//! Finite-difference time marching with blow-up detection, positivity
//! monitoring, lifespan sweeps, and a Picard cross-check.

mod analysis;
mod config;
mod picard;
mod run;
mod scheme;

pub use analysis::{
    check_ladder, estimate_lifespan_sweep, fit_power_law, observed_order, positivity_monitor,
    summarize_sweep, PositivityReport, PowerLawFit, SweepReport, Violation, ViolationKind,
    DEFAULT_POSITIVITY_TOLERANCE,
};
pub use config::{Probe, SolverConfig, MAX_CFL};
pub use picard::{picard_iterate, picard_sequence, Picard, PicardReport};
pub use run::{
    confirm_refinement, default_operator, refine_lifespan, run, run_with, solver_grid, LifespanRecord, ProbeSample,
    RefinedLifespan, RunDiagnostics, RunOutcome, RunStatus,
};
pub use scheme::{
    free_boundary, radial_laplacian, step, uniform_spacing, Formulation, InitialData, Solver,
};

#[cfg(test)]
mod tests;
