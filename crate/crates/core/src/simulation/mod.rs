//! Monte Carlo harness: scenarios, the parallel runner, the published
//! grids, goodness-of-fit checks and file formats.

pub mod config;
pub mod invariance;
pub mod ks;
pub mod laws;
pub mod report;
mod runner;
mod scenario;
pub mod tables;

pub use config::{load_scenarios, parse_scenarios};
pub use invariance::{invariance_harness, InvarianceReport, ParameterSet};
pub use laws::{blinded_variance_law, distribution_tests, NormalTarget, NormalityReport, Regime};
pub use runner::{run_scenario, ReplicationRecord, ScenarioOutcome, Workers};
pub use scenario::{DesignSpec, ExactMoments, ModeSelection, Scenario, ScenarioSummary, DEFAULT_SEED};
pub use tables::{run_table, TableId, TableRow};

use rayon::prelude::*;

use crate::distributions::RngStream;
use crate::error::Result;
use crate::monitoring::{run_to_stop, Mode, MonitorConfig};

/// Number of replications whose blinded stopping size is at most `limit`.
pub fn lower_tail_count(s: &Scenario, limit: f64, workers: Workers) -> Result<u64> {
    s.validate()?;
    let cfg = MonitorConfig::new(s.v(), s.n1, s.max_n(), Mode::Blinded)?.with_trace(false);
    workers.install(|| {
        (0..s.replications)
            .into_par_iter()
            .filter(|&r| run_to_stop(&cfg, &s.truth, &mut RngStream::new(s.base_seed, r)).n_stop as f64 <= limit)
            .count() as u64
    })
}
