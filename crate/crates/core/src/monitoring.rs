//! Continuous monitoring of the variance.
//!
//! After every enrolled pair with `n >= n1` the chosen variance estimator is
//! compared with `n / v`; the first `n` with `σ̂²_n <= n / v` is the stopping
//! size. The comparison is exact, without tolerance.

use std::fmt;
use std::str::FromStr;

use crate::design::ScenarioTruth;
use crate::distributions::{sample_standard_normal, RngStream};
use crate::error::{Error, Result};
use crate::estimators::PairAccumulator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Blinded,
    Unblinded,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Blinded => "blinded",
            Mode::Unblinded => "unblinded",
        }
    }

    #[inline]
    fn variance(&self, acc: &PairAccumulator) -> f64 {
        match self {
            Mode::Blinded => acc.blinded_unchecked(),
            Mode::Unblinded => acc.unblinded_unchecked(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blinded" => Ok(Mode::Blinded),
            "unblinded" => Ok(Mode::Unblinded),
            other => Err(Error::domain(format!("unknown monitoring mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorConfig {
    v: f64,
    n1: u64,
    max_n: u64,
    mode: Mode,
    keep_trace: bool,
}

impl MonitorConfig {
    pub fn new(v: f64, n1: u64, max_n: u64, mode: Mode) -> Result<Self> {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("v {v} must be positive and finite")));
        }
        if n1 < 2 {
            return Err(Error::domain(format!("initial sample size n1={n1} must be >= 2")));
        }
        if max_n <= n1 {
            return Err(Error::domain(format!("max_n={max_n} must exceed n1={n1}")));
        }
        Ok(Self { v, n1, max_n, mode, keep_trace: true })
    }

    /// Keep or drop the per-step trace. Dropping it leaves only the stopping
    /// size and the final estimate.
    pub fn with_trace(mut self, keep: bool) -> Self {
        self.keep_trace = keep;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn v(&self) -> f64 {
        self.v
    }
    pub fn n1(&self) -> u64 {
        self.n1
    }
    pub fn max_n(&self) -> u64 {
        self.max_n
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
}

/// `ceil(20 (n1 + v (σ² + δ²/4)))`: twenty times the moment bound on the
/// blinded stopping size.
pub fn default_max_n(v: f64, n1: u64, truth: &ScenarioTruth) -> u64 {
    let d = truth.delta();
    (20.0 * (n1 as f64 + v * (truth.variance() + d * d / 4.0))).ceil() as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub n: u64,
    pub sigma_hat_sq: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StopResult {
    pub n_stop: u64,
    pub stopped: bool,
    /// Estimate at `n_stop` (NaN if nothing was checked).
    pub final_variance: f64,
    pub trace: Vec<TraceEntry>,
}

/// Incremental stopping-rule evaluator over one accumulator.
#[derive(Debug, Clone)]
pub struct Monitor {
    config: MonitorConfig,
    acc: PairAccumulator,
    trace: Vec<TraceEntry>,
    last_variance: f64,
    stopped: bool,
}

impl Monitor {
    pub fn new(config: MonitorConfig) -> Self {
        Self { config, acc: PairAccumulator::new(), trace: Vec::new(), last_variance: f64::NAN, stopped: false }
    }

    /// Feeds one pair. Returns `true` once the rule has fired; pairs pushed
    /// after that are ignored.
    pub fn push(&mut self, x: f64, y: f64) -> Result<bool> {
        if self.stopped {
            return Ok(true);
        }
        self.acc.push_pair(x, y)?;
        Ok(self.check())
    }

    #[inline]
    fn check(&mut self) -> bool {
        let n = self.acc.n();
        if n < self.config.n1 {
            return false;
        }
        let est = self.config.mode.variance(&self.acc);
        let threshold = n as f64 / self.config.v;
        self.last_variance = est;
        if self.config.keep_trace {
            self.trace.push(TraceEntry { n, sigma_hat_sq: est, threshold });
        }
        self.stopped = est <= threshold;
        self.stopped
    }

    pub fn n(&self) -> u64 {
        self.acc.n()
    }

    pub fn is_stopped(&self) -> bool {
        self.stopped
    }

    pub fn accumulator(&self) -> &PairAccumulator {
        &self.acc
    }

    pub fn into_result(self) -> StopResult {
        StopResult {
            n_stop: self.acc.n(),
            stopped: self.stopped,
            final_variance: self.last_variance,
            trace: self.trace,
        }
    }
}

#[inline]
fn draw_pair(truth: &ScenarioTruth, rng: &mut RngStream) -> (f64, f64) {
    let xi = sample_standard_normal(rng);
    let eta = sample_standard_normal(rng);
    (truth.mu1() + truth.sigma() * xi, truth.mu2() + truth.sigma() * eta)
}

/// Simulates pairs `X = μ₁ + σξ`, `Y = μ₂ + ση` until the rule fires or
/// `max_n` pairs have been drawn.
pub fn run_to_stop(config: &MonitorConfig, truth: &ScenarioTruth, rng: &mut RngStream) -> StopResult {
    let mut monitor = Monitor::new(*config);
    while monitor.n() < config.max_n {
        let (x, y) = draw_pair(truth, rng);
        monitor.acc.push_unchecked(x, y);
        if monitor.check() {
            break;
        }
    }
    monitor.into_result()
}

/// Replays a fixed sequence of pairs through the rule.
pub fn run_on_stream(config: &MonitorConfig, pairs: &[(f64, f64)]) -> Result<StopResult> {
    let mut monitor = Monitor::new(*config);
    for &(x, y) in pairs {
        if monitor.push(x, y)? || monitor.n() >= config.max_n {
            return Ok(monitor.into_result());
        }
    }
    Err(Error::InsufficientData { partial: Box::new(monitor.into_result()) })
}

/// Stopping sizes of both rules on one shared stream of pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairedStop {
    pub blinded: u64,
    pub blinded_stopped: bool,
    pub unblinded: u64,
    pub unblinded_stopped: bool,
}

/// Runs blinded and unblinded monitoring side by side on one stream; pairs
/// are drawn until both have stopped (or hit `max_n`). Each rule sees the
/// same prefix of pairs it would see when run alone.
pub fn run_both(v: f64, n1: u64, max_n: u64, truth: &ScenarioTruth, rng: &mut RngStream) -> PairedStop {
    let mut acc = PairAccumulator::new();
    let mut blinded = None;
    let mut unblinded = None;
    for n in 1..=max_n {
        let (x, y) = draw_pair(truth, rng);
        acc.push_unchecked(x, y);
        if n < n1 {
            continue;
        }
        let threshold = n as f64 / v;
        if blinded.is_none() && acc.blinded_unchecked() <= threshold {
            blinded = Some(n);
        }
        if unblinded.is_none() && acc.unblinded_unchecked() <= threshold {
            unblinded = Some(n);
        }
        if blinded.is_some() && unblinded.is_some() {
            break;
        }
    }
    PairedStop {
        blinded: blinded.unwrap_or(max_n),
        blinded_stopped: blinded.is_some(),
        unblinded: unblinded.unwrap_or(max_n),
        unblinded_stopped: unblinded.is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: Mode) -> MonitorConfig {
        MonitorConfig::new(1.0, 10, 10_000, mode).unwrap()
    }

    /// Stopping index by re-evaluating the variance from scratch at every n.
    fn brute_force_stop(pairs: &[(f64, f64)], v: f64, n1: usize, mode: Mode) -> Option<usize> {
        (n1..=pairs.len()).find(|&n| {
            let xs: Vec<f64> = pairs[..n].iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs[..n].iter().map(|p| p.1).collect();
            let mx = xs.iter().sum::<f64>() / n as f64;
            let my = ys.iter().sum::<f64>() / n as f64;
            let sx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let sy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
            let est = match mode {
                Mode::Unblinded => (sx + sy) / (2 * n - 2) as f64,
                Mode::Blinded => {
                    let mz = (mx + my) / 2.0;
                    let sz: f64 = xs.iter().chain(&ys).map(|z| (z - mz).powi(2)).sum();
                    sz / (2 * n - 1) as f64
                }
            };
            est <= n as f64 / v
        })
    }

    /// Pairs (-a_k, a_k) with a large early spread that decays so the
    /// unblinded estimate first drops below n/v at n = 13.
    fn crafted_stream() -> Vec<(f64, f64)> {
        let mut pairs: Vec<(f64, f64)> = (0..10)
            .map(|k| {
                let a = if k % 2 == 0 { 3.75 } else { -3.75 };
                (-a, a)
            })
            .collect();
        pairs.extend([(-0.2, 0.2), (0.2, -0.2), (0.0, 0.0)]);
        pairs.extend(std::iter::repeat_n((0.0, 0.0), 20));
        pairs
    }

    #[test]
    fn config_validation() {
        assert!(MonitorConfig::new(1.0, 1, 100, Mode::Blinded).is_err());
        assert!(MonitorConfig::new(1.0, 10, 10, Mode::Blinded).is_err());
        assert!(MonitorConfig::new(0.0, 10, 100, Mode::Blinded).is_err());
        assert!(MonitorConfig::new(1.0, 2, 3, Mode::Blinded).is_ok());
    }

    #[test]
    fn zero_variance_stops_at_n1() {
        let pairs = vec![(0.0, 0.0); 50];
        for mode in [Mode::Blinded, Mode::Unblinded] {
            let r = run_on_stream(&cfg(mode), &pairs).unwrap();
            assert_eq!(r.n_stop, 10);
            assert!(r.stopped);
            assert_eq!(r.trace.len(), 1);
        }
        let r = run_on_stream(&cfg(Mode::Blinded), &[(3.0, 3.0); 12]).unwrap();
        assert_eq!(r.n_stop, 10);
    }

    #[test]
    fn crafted_stream_stops_at_thirteen() {
        let pairs = crafted_stream();
        for mode in [Mode::Blinded, Mode::Unblinded] {
            let want = brute_force_stop(&pairs, 1.0, 10, mode).unwrap();
            assert_eq!(want, 13, "{mode}");
            let r = run_on_stream(&cfg(mode), &pairs).unwrap();
            assert_eq!(r.n_stop, 13);
            assert_eq!(r.trace.len(), 4);
            let last = r.trace.last().unwrap();
            assert!(last.sigma_hat_sq <= last.threshold);
            assert!(r.trace[..3].iter().all(|t| t.sigma_hat_sq > t.threshold));
        }
    }

    #[test]
    fn short_stream_reports_partial_trace() {
        let pairs = crafted_stream();
        let err = run_on_stream(&cfg(Mode::Unblinded), &pairs[..12]).unwrap_err();
        match err {
            Error::InsufficientData { partial } => {
                assert!(!partial.stopped);
                assert_eq!(partial.n_stop, 12);
                assert_eq!(partial.trace.len(), 3);
            }
            other => panic!("unexpected {other}"),
        }
        assert!(run_on_stream(&cfg(Mode::Unblinded), &pairs[..5]).is_err());
    }

    #[test]
    fn cap_is_reported_not_raised() {
        let pairs: Vec<(f64, f64)> = (0..100).map(|k| (k as f64 * 50.0, -(k as f64) * 50.0)).collect();
        let c = MonitorConfig::new(1.0, 2, 20, Mode::Blinded).unwrap();
        let r = run_on_stream(&c, &pairs).unwrap();
        assert!(!r.stopped);
        assert_eq!(r.n_stop, 20);

        let truth = ScenarioTruth::new(0.0, 0.0, 1e6).unwrap();
        let r = run_to_stop(&c, &truth, &mut RngStream::new(5, 0));
        assert!(!r.stopped);
        assert_eq!(r.n_stop, 20);
    }

    #[test]
    fn blinded_stops_no_earlier_with_arm_shift() {
        let mut rng = RngStream::new(17, 0);
        for _ in 0..200 {
            let truth = ScenarioTruth::new(2.0, 0.0, 3.0).unwrap();
            let pairs: Vec<(f64, f64)> = (0..400).map(|_| draw_pair(&truth, &mut rng)).collect();
            let b = run_on_stream(&cfg(Mode::Blinded), &pairs).unwrap();
            let u = run_on_stream(&cfg(Mode::Unblinded), &pairs).unwrap();
            let bf_b = brute_force_stop(&pairs, 1.0, 10, Mode::Blinded).unwrap();
            assert_eq!(b.n_stop as usize, bf_b);
            // the blinded estimate dominates (2n-2)/(2n-1) times the
            // unblinded one, so it stops no earlier whenever that factor is
            // absorbed: check the pointwise inequality along the trace
            for (tb, tu) in b.trace.iter().zip(&u.trace) {
                let n = tb.n as f64;
                assert!(tb.sigma_hat_sq >= (2.0 * n - 2.0) / (2.0 * n - 1.0) * tu.sigma_hat_sq * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn run_both_matches_single_runs() {
        let truth = ScenarioTruth::new(1.0, 0.0, 10.0).unwrap();
        for r in 0..50 {
            let both = run_both(1.0, 10, 2_000, &truth, &mut RngStream::new(3, r));
            let b = run_to_stop(&cfg(Mode::Blinded).with_trace(false), &truth, &mut RngStream::new(3, r));
            let u = run_to_stop(&cfg(Mode::Unblinded).with_trace(false), &truth, &mut RngStream::new(3, r));
            assert_eq!(both.blinded, b.n_stop);
            assert_eq!(both.unblinded, u.n_stop);
            assert!(both.blinded_stopped && both.unblinded_stopped);
            assert!(b.trace.is_empty());
        }
    }

    #[test]
    fn mode_round_trip() {
        for m in [Mode::Blinded, Mode::Unblinded] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("both".parse::<Mode>().is_err());
    }
}
