//! Experiment orchestration for skin-effect probes of two-band lattices.
//!
//! - [`sweep`]: simulated versus predicted `λ(v)` over a velocity grid,
//!   the peak velocity `v_m` and both skin-effect verdicts.
//! - [`scan`]: zero-velocity growth rate of model III across `δ`.
//! - [`reproduce`]: data files and manifests for the reference figure set.
//! - [`output`]: versioned CSV tables and JSON.
//! - [`cli`]: the `probelab` command line.

pub mod cli;
pub mod error;
pub mod output;
pub mod reproduce;
pub mod scan;
pub mod sweep;

pub use error::{LabError, LabResult};
