//! Parallel replication runner.
//!
//! Replication `r` draws from substream `r` of the scenario's base seed, and
//! results are reduced through exact integer sums, so the output does not
//! depend on the number of worker threads or on scheduling order.

use rayon::prelude::*;

use super::scenario::{ExactMoments, ModeSelection, Scenario, ScenarioSummary};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::monitoring::{run_both, run_to_stop, Mode, MonitorConfig};
use crate::theory::{mean_bound, BoundVariant};

/// Worker thread count; `None` uses rayon's global pool.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Workers(pub Option<usize>);

impl Workers {
    pub fn fixed(k: usize) -> Self {
        Workers(Some(k.max(1)))
    }

    /// Runs `f` inside a pool of the requested size.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.0 {
            None => Ok(f()),
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicationRecord {
    pub replication: u64,
    pub mode: Mode,
    pub n_stop: u64,
    pub stopped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    /// One summary per selected mode, blinded first.
    pub summaries: Vec<ScenarioSummary>,
    /// Per-replication stopping sizes, when requested.
    pub records: Option<Vec<ReplicationRecord>>,
}

impl ScenarioOutcome {
    pub fn summary(&self, mode: Mode) -> Option<&ScenarioSummary> {
        self.summaries.iter().find(|s| s.mode == mode)
    }
}

#[derive(Clone, Copy)]
struct RepResult {
    blinded: (u64, bool),
    unblinded: (u64, bool),
}

fn run_replication(s: &Scenario, max_n: u64, r: u64) -> RepResult {
    let mut rng = RngStream::new(s.base_seed, r);
    let v = s.v();
    match s.modes {
        ModeSelection::Both => {
            let p = run_both(v, s.n1, max_n, &s.truth, &mut rng);
            RepResult { blinded: (p.blinded, p.blinded_stopped), unblinded: (p.unblinded, p.unblinded_stopped) }
        }
        ModeSelection::Blinded | ModeSelection::Unblinded => {
            let mode = s.modes.modes()[0];
            // validated by the caller
            let cfg = MonitorConfig::new(v, s.n1, max_n, mode).expect("valid config").with_trace(false);
            let res = run_to_stop(&cfg, &s.truth, &mut rng);
            let out = (res.n_stop, res.stopped);
            RepResult { blinded: out, unblinded: out }
        }
    }
}

/// Runs all replications of a scenario.
pub fn run_scenario(s: &Scenario, workers: Workers, keep_records: bool) -> Result<ScenarioOutcome> {
    s.validate()?;
    let max_n = s.max_n();
    let reps: Vec<RepResult> =
        workers.install(|| (0..s.replications).into_par_iter().map(|r| run_replication(s, max_n, r)).collect())?;

    let mut summaries = Vec::new();
    let mut records = keep_records.then(Vec::new);
    for &mode in s.modes.modes() {
        let pick = |rep: &RepResult| match mode {
            Mode::Blinded => rep.blinded,
            Mode::Unblinded => rep.unblinded,
        };
        let mut moments = ExactMoments::default();
        let mut cap_hits = 0;
        for (r, rep) in reps.iter().enumerate() {
            let (n_stop, stopped) = pick(rep);
            moments.push(n_stop);
            if !stopped {
                cap_hits += 1;
            }
            if let Some(recs) = records.as_mut() {
                recs.push(ReplicationRecord { replication: r as u64, mode, n_stop, stopped });
            }
        }
        summaries.push(summarize(s, mode, moments, cap_hits)?);
    }
    Ok(ScenarioOutcome { summaries, records })
}

pub(crate) fn summarize(s: &Scenario, mode: Mode, moments: ExactMoments, cap_hits: u64) -> Result<ScenarioSummary> {
    let t = &s.truth;
    let v = s.v();
    let n_req = s.n_req();
    let mean_n = moments.mean();
    Ok(ScenarioSummary {
        label: s.label.clone(),
        mode,
        mu1: t.mu1(),
        mu2: t.mu2(),
        sigma: t.sigma(),
        v,
        n_req,
        n1: s.n1,
        replications: moments.count,
        mean_n,
        sd_n: moments.sd(),
        ratio: mean_n / n_req,
        bound_table: mean_bound(s.n1, v, t.sigma(), t.mu1(), t.mu2(), BoundVariant::Table)?,
        bound_theorem: mean_bound(s.n1, v, t.sigma(), t.mu1(), t.mu2(), BoundVariant::Theorem)?,
        cap_hits,
        moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::ScenarioTruth;

    fn small() -> Scenario {
        let t = ScenarioTruth::new(1.0, 0.0, 10f64.sqrt()).unwrap();
        Scenario::new(1.0, t).with_replications(500).with_seed(9).with_label("small")
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let a = run_scenario(&small(), Workers::fixed(1), true).unwrap();
        let b = run_scenario(&small(), Workers::fixed(8), true).unwrap();
        let c = run_scenario(&small(), Workers::default(), true).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn single_mode_agrees_with_both() {
        let both = run_scenario(&small(), Workers::default(), false).unwrap();
        let only_b = run_scenario(&small().with_modes(ModeSelection::Blinded), Workers::default(), false).unwrap();
        let only_u = run_scenario(&small().with_modes(ModeSelection::Unblinded), Workers::default(), false).unwrap();
        assert_eq!(both.summaries.len(), 2);
        assert_eq!(both.summary(Mode::Blinded), only_b.summary(Mode::Blinded));
        assert_eq!(both.summary(Mode::Unblinded), only_u.summary(Mode::Unblinded));
    }

    #[test]
    fn summary_consistency() {
        let out = run_scenario(&small(), Workers::default(), true).unwrap();
        for s in &out.summaries {
            assert!((s.ratio - s.mean_n / s.n_req).abs() <= 1e-12 * s.ratio);
            assert!(s.sd_n >= 0.0);
            assert_eq!(s.cap_hits, 0);
            assert_eq!(s.replications, 500);
            assert!((s.bound_table - 11.75).abs() < 1e-9);
        }
        assert_eq!(out.records.unwrap().len(), 1000);
    }

    #[test]
    fn single_replication_degenerate() {
        // tiny sigma with huge v forces stopping at n1
        let t = ScenarioTruth::new(0.0, 0.0, 1e-6).unwrap();
        let s = Scenario::new(1.0, t).with_replications(1);
        let out = run_scenario(&s, Workers::default(), false).unwrap();
        for s in &out.summaries {
            assert_eq!(s.mean_n, 10.0);
            assert_eq!(s.sd_n, 0.0);
        }
    }
}
