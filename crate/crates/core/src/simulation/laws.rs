//! Goodness-of-fit checks against the limiting and exact laws.

use rayon::prelude::*;

use super::ks::{ks_one_sample, ks_two_sample, KsOutcome};
use super::runner::Workers;
use super::scenario::Scenario;
use crate::design::ScenarioTruth;
use crate::distributions::{normal_cdf, sample_standard_normal, NoncentralChiSq, RngStream};
use crate::error::{Error, Result};
use crate::estimators::PairAccumulator;
use crate::monitoring::{run_to_stop, Mode, MonitorConfig};
use crate::theory::TheoryTargets;

/// Significance level of every goodness-of-fit check.
pub const KS_LEVEL: f64 = 0.01;

// Salts that move auxiliary draws onto seeds disjoint from the data streams.
const ORACLE_SALT: u64 = 0x6f72_6163_6c65_0001;
const JITTER_SALT: u64 = 0x6a69_7474_6572_0002;

/// The scaled blinded variance `(2n-1) σ̂²/σ²` against `χ²_{2n-1}(λ)`,
/// `λ = n δ² / (2σ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceLawReport {
    pub n: u64,
    pub lambda: f64,
    pub replicates: u64,
    /// Against the series CDF.
    pub versus_cdf: KsOutcome,
    /// Against direct draws from the noncentral chi-squared.
    pub versus_sampler: KsOutcome,
}

impl VarianceLawReport {
    pub fn passes(&self) -> bool {
        self.versus_cdf.passes(KS_LEVEL) && self.versus_sampler.passes(KS_LEVEL)
    }
}

pub fn blinded_variance_law(
    truth: &ScenarioTruth,
    n: u64,
    replicates: u64,
    base_seed: u64,
    workers: Workers,
) -> Result<VarianceLawReport> {
    if n < 1 || replicates < 2 {
        return Err(Error::domain("need n >= 1 and at least two replicates"));
    }
    let dof = (2 * n - 1) as u32;
    let lambda = n as f64 * truth.delta() * truth.delta() / (2.0 * truth.variance());
    let law = NoncentralChiSq::new(dof, lambda)?;
    let (stats, oracle): (Vec<f64>, Vec<f64>) = workers.install(|| {
        (0..replicates)
            .into_par_iter()
            .map(|r| {
                let mut rng = RngStream::new(base_seed, r);
                let mut acc = PairAccumulator::new();
                for _ in 0..n {
                    let x = truth.mu1() + truth.sigma() * sample_standard_normal(&mut rng);
                    let y = truth.mu2() + truth.sigma() * sample_standard_normal(&mut rng);
                    acc.push_unchecked(x, y);
                }
                let stat = dof as f64 * acc.blinded_unchecked() / truth.variance();
                let draw = law.sample(&mut RngStream::new(base_seed ^ ORACLE_SALT, r));
                (stat, draw)
            })
            .unzip()
    })?;
    let versus_cdf = ks_one_sample(&stats, |x| law.cdf(x.max(0.0)).unwrap_or(0.0));
    let versus_sampler = ks_two_sample(&stats, &oracle);
    Ok(VarianceLawReport { n, lambda, replicates, versus_cdf, versus_sampler })
}

/// Mean of an estimator at fixed `n` over independent replicates, with its
/// Monte Carlo standard error.
pub fn estimator_mean(
    truth: &ScenarioTruth,
    n: u64,
    mode: Mode,
    replicates: u64,
    base_seed: u64,
    workers: Workers,
) -> Result<(f64, f64)> {
    if n < 2 || replicates < 2 {
        return Err(Error::domain("need n >= 2 and at least two replicates"));
    }
    let values: Vec<f64> = workers.install(|| {
        (0..replicates)
            .into_par_iter()
            .map(|r| {
                let mut rng = RngStream::new(base_seed, r);
                let mut acc = PairAccumulator::new();
                for _ in 0..n {
                    let x = truth.mu1() + truth.sigma() * sample_standard_normal(&mut rng);
                    let y = truth.mu2() + truth.sigma() * sample_standard_normal(&mut rng);
                    acc.push_unchecked(x, y);
                }
                match mode {
                    Mode::Blinded => acc.blinded_unchecked(),
                    Mode::Unblinded => acc.unblinded_unchecked(),
                }
            })
            .collect()
    })?;
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Ok((mean, (var / k).sqrt()))
}

/// Which asymptotic regime supplies the normal limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// σ grows with v fixed: center `n_req`, variance 1.
    Sigma,
    /// v grows with σ fixed: center `n_req (1 + δ²/4σ²)`,
    /// variance `(4σ² + 2δ²)/(4σ² + δ²)`.
    V,
}

/// Center and variance of `(N - center) / √n_req`'s normal limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalTarget {
    pub n_req: f64,
    pub center: f64,
    pub variance: f64,
}

impl NormalTarget {
    pub fn from_targets(t: &TheoryTargets, regime: Regime) -> Self {
        match regime {
            Regime::Sigma => Self { n_req: t.n_req, center: t.clt_center_sigma, variance: t.clt_var_sigma },
            Regime::V => Self { n_req: t.n_req, center: t.clt_center_v, variance: t.clt_var_v },
        }
    }

    pub fn with_variance(mut self, variance: f64) -> Self {
        self.variance = variance;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityReport {
    pub target: NormalTarget,
    pub replications: u64,
    pub ks: KsOutcome,
    pub passed: bool,
}

/// KS test of the standardized blinded stopping size against N(0, 1).
///
/// Each `N` is spread uniformly over `[N - 1/2, N + 1/2)` before
/// standardizing, so the lattice of integer stopping sizes does not by
/// itself register as a departure from a continuous law.
pub fn distribution_tests(s: &Scenario, target: &NormalTarget, workers: Workers) -> Result<NormalityReport> {
    s.validate()?;
    if !(target.variance > 0.0) {
        return Err(Error::domain("target variance must be positive"));
    }
    let cfg = MonitorConfig::new(s.v(), s.n1, s.max_n(), Mode::Blinded)?.with_trace(false);
    let scale = (target.n_req * target.variance).sqrt();
    let z: Vec<f64> = workers.install(|| {
        (0..s.replications)
            .into_par_iter()
            .map(|r| {
                let n = run_to_stop(&cfg, &s.truth, &mut RngStream::new(s.base_seed, r)).n_stop as f64;
                let jitter = RngStream::new(s.base_seed ^ JITTER_SALT, r).next_open01() - 0.5;
                (n + jitter - target.center) / scale
            })
            .collect()
    })?;
    let ks = ks_one_sample(&z, normal_cdf);
    Ok(NormalityReport { target: *target, replications: s.replications, ks, passed: ks.passes(KS_LEVEL) })
}
