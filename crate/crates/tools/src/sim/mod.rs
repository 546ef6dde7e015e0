//! Monte-Carlo experiments on the code.
//!
//! Every random choice is drawn from a stream keyed by a hash of the sweep
//! seed and the indices of the grid point, instance and trial, so results do
//! not depend on evaluation order and runs are reproducible bit for bit.

mod availability;
mod converse;
mod coverage;
mod crosscheck;
mod erasure;
pub mod stats;

pub use availability::{availability_study, AvailabilityStudy, SeedAvailability};
pub use converse::{converse_check, poisson_all_covered, ConverseReport};
pub use coverage::{coverage_stats, expected_coverage, CoverageStats};
pub use crosscheck::{
    matching_rank_crosscheck, schwartz_zippel_check, Contingency, CrosscheckCell, SchwartzZippelReport,
};
pub use erasure::{run_erasure_sweep, ErasureExperiment, ExperimentResult, GridPoint, SweepMode, CSV_HEADER};

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rfc_core::rng::mix_seed;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid experiment configuration: {0}")]
    ConfigInvalid(String),
}

/// Random stream for one cell of an experiment.
pub(crate) fn stream(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(parts))
}

/// `ceil(x)` that ignores float noise below 1e-9, so `(1 + 0.05) * 100` is 105.
pub fn ceil_tolerant(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// Encoded symbol count for a rate: `round(k / rate)`.
pub fn encoded_count(k: u32, rate: f64) -> usize {
    (f64::from(k) / rate).round() as usize
}
