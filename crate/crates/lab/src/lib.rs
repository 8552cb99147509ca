//! Std companion to `hartree-core`: reference oracles, experiment plans,
//! artifact IO and the command-line front end.

pub mod artifacts;
pub mod checks;
pub mod cli;
pub mod defaults;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod oracle;
pub mod plan;
pub mod snapshot;

pub use error::{LabError, Result};
