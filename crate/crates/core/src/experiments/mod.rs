//! Exact and Monte Carlo drivers for each protocol.
//!
//! Every stochastic quantity is drawn from a per-trial generator seeded with
//! [`mix64`]`(master_seed, trial_id)`. Trials run on the rayon pool and are
//! collected in trial order, so results do not depend on scheduling.

mod config;
mod epr;
mod erasure;
mod interfere;
mod lhv_compare;
mod output;
pub mod stats;
mod table;
mod toolate_run;
mod verify;

pub use config::{ExperimentConfig, Protocol};
pub use epr::run_epr;
pub use erasure::{run_erasure, ErasureReport, SampledSuccess};
pub use interfere::{run_interference, InterferenceReport, PortSample, SampledDiscrimination};
pub use lhv_compare::{run_lhv_compare, ChshComparison, ConspiracyComparison, LhvCompareReport};
pub use output::{metadata_path, records_path, write_outputs, Metadata, Output, ARTIFACT};
pub use stats::{chi_square, mix64, ChiSquare};
pub use table::{EstimateRow, EstimateTable};
pub use toolate_run::{run_toolate, OutcomeRecord, Stage, ToolateRun};
pub use verify::{run_verify, Check, VerifyReport};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Generator for one trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix64(master_seed, trial))
}

/// Runs `f(trial_id)` for `first..first + n` in parallel; output in trial order.
pub(crate) fn run_trials<T, F>(first: u64, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (first..first + n).into_par_iter().map(f).collect()
}

/// Plug-in binomial standard error.
pub(crate) fn binomial_stderr(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).max(0.0).sqrt()
}
