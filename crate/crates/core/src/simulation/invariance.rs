//! Shared-stream comparison of stopping sizes across parameter sets with a
//! common `n_req = v σ²`.
//!
//! Every parameter set maps the same standardized draws `(ξ_i, η_i)` of a
//! replication through `X = μ₁ + σξ`, `Y = μ₂ + ση`. The unblinded estimate
//! then scales exactly with σ², so its stopping size depends on `n_req`
//! only; the blinded one also sees `δ/σ`.

use rayon::prelude::*;

use super::runner::Workers;
use crate::design::ScenarioTruth;
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::monitoring::{default_max_n, run_to_stop, Mode, MonitorConfig, StopResult};

/// `(v, σ, μ₁, μ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    pub v: f64,
    pub sigma: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl ParameterSet {
    pub fn new(v: f64, sigma: f64, mu1: f64, mu2: f64) -> Self {
        Self { v, sigma, mu1, mu2 }
    }
    pub fn n_req(&self) -> f64 {
        self.v * self.sigma * self.sigma
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub replication: u64,
    /// Stopping size under each parameter set, in input order.
    pub n_stops: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub n_req: f64,
    pub mode: Mode,
    pub replications: u64,
    pub divergent: Vec<Divergence>,
    /// Full traces of the first few divergent replications, one per
    /// parameter set.
    pub traces: Vec<(u64, Vec<StopResult>)>,
}

impl InvarianceReport {
    pub fn identical(&self) -> bool {
        self.divergent.is_empty()
    }
}

const TRACED_DIVERGENCES: usize = 3;

pub fn invariance_harness(
    n_req: f64,
    sets: &[ParameterSet],
    mode: Mode,
    n1: u64,
    replications: u64,
    base_seed: u64,
    workers: Workers,
) -> Result<InvarianceReport> {
    if sets.is_empty() {
        return Err(Error::domain("need at least one parameter set"));
    }
    let mut configs = Vec::with_capacity(sets.len());
    let mut truths = Vec::with_capacity(sets.len());
    for p in sets {
        if ((p.n_req() - n_req) / n_req).abs() > 1e-12 {
            return Err(Error::domain(format!("parameter set {p:?} has v*sigma^2 = {} instead of {n_req}", p.n_req())));
        }
        truths.push(ScenarioTruth::new(p.mu1, p.mu2, p.sigma)?);
    }
    // one cap for all sets so that cap hits cannot create spurious
    // differences
    let max_n = sets.iter().zip(&truths).map(|(p, t)| default_max_n(p.v, n1, t)).max().unwrap_or(0);
    for p in sets {
        configs.push(MonitorConfig::new(p.v, n1, max_n, mode)?.with_trace(false));
    }

    let stops: Vec<Vec<u64>> = workers.install(|| {
        (0..replications)
            .into_par_iter()
            .map(|r| {
                configs
                    .iter()
                    .zip(&truths)
                    .map(|(cfg, truth)| run_to_stop(cfg, truth, &mut RngStream::new(base_seed, r)).n_stop)
                    .collect()
            })
            .collect()
    })?;

    let divergent: Vec<Divergence> = stops
        .into_iter()
        .enumerate()
        .filter(|(_, row)| row.iter().any(|&n| n != row[0]))
        .map(|(r, n_stops)| Divergence { replication: r as u64, n_stops })
        .collect();

    let traces = divergent
        .iter()
        .take(TRACED_DIVERGENCES)
        .map(|d| {
            let runs = configs
                .iter()
                .zip(&truths)
                .map(|(cfg, truth)| {
                    run_to_stop(&cfg.with_trace(true), truth, &mut RngStream::new(base_seed, d.replication))
                })
                .collect();
            (d.replication, runs)
        })
        .collect();

    Ok(InvarianceReport { n_req, mode, replications, divergent, traces })
}

/// Three sets with `v σ² = n_req` and distinct `δ/σ`.
pub fn standard_sets(n_req: f64) -> Vec<ParameterSet> {
    vec![
        ParameterSet::new(1.0, n_req.sqrt(), 1.0, 0.0),
        ParameterSet::new(n_req / 25.0, 5.0, 2.0, 0.0),
        ParameterSet::new(n_req, 1.0, 5.0, 0.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_n_req() {
        let sets = [ParameterSet::new(1.0, 10.0, 1.0, 0.0), ParameterSet::new(2.0, 10.0, 1.0, 0.0)];
        assert!(invariance_harness(100.0, &sets, Mode::Unblinded, 10, 10, 1, Workers::default()).is_err());
    }

    #[test]
    fn set_against_itself() {
        let p = ParameterSet::new(1.0, 10.0, 1.0, 0.0);
        let rep = invariance_harness(100.0, &[p, p], Mode::Blinded, 10, 200, 1, Workers::default()).unwrap();
        assert!(rep.identical());
    }

    #[test]
    fn unblinded_invariant_blinded_not() {
        let sets = [
            ParameterSet::new(1.0, 10.0, 1.0, 0.0),
            ParameterSet::new(4.0, 5.0, 2.0, 0.0),
            ParameterSet::new(100.0, 1.0, 5.0, 0.0),
        ];
        let u = invariance_harness(100.0, &sets, Mode::Unblinded, 10, 500, 3, Workers::default()).unwrap();
        assert!(u.identical(), "{:?}", u.divergent.first());
        let b = invariance_harness(100.0, &sets, Mode::Blinded, 10, 500, 3, Workers::default()).unwrap();
        assert!(!b.identical());
        assert!(!b.traces.is_empty());
        assert_eq!(b.traces[0].1.len(), 3);
    }

    #[test]
    fn standard_sets_share_n_req() {
        for n_req in [10.0, 100.0, 1000.0] {
            for p in standard_sets(n_req) {
                assert!((p.n_req() / n_req - 1.0).abs() < 1e-12);
            }
        }
    }
}
