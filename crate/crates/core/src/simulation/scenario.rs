use std::fmt;
use std::str::FromStr;

use crate::design::{DesignParams, ScenarioTruth};
use crate::error::{Error, Result};
use crate::monitoring::{default_max_n, Mode};

/// Default base seed when none is given.
pub const DEFAULT_SEED: u64 = 20_120_001;

/// How `v` is obtained for a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DesignSpec {
    Direct(f64),
    Power(DesignParams),
}

impl DesignSpec {
    pub fn v(&self) -> f64 {
        match self {
            DesignSpec::Direct(v) => *v,
            DesignSpec::Power(d) => d.v(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSelection {
    Blinded,
    Unblinded,
    Both,
}

impl ModeSelection {
    pub fn modes(&self) -> &'static [Mode] {
        match self {
            ModeSelection::Blinded => &[Mode::Blinded],
            ModeSelection::Unblinded => &[Mode::Unblinded],
            ModeSelection::Both => &[Mode::Blinded, Mode::Unblinded],
        }
    }
}

impl fmt::Display for ModeSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeSelection::Blinded => "blinded",
            ModeSelection::Unblinded => "unblinded",
            ModeSelection::Both => "both",
        })
    }
}

impl FromStr for ModeSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blinded" => Ok(ModeSelection::Blinded),
            "unblinded" => Ok(ModeSelection::Unblinded),
            "both" => Ok(ModeSelection::Both),
            _ => Err(Error::domain(format!("mode must be blinded, unblinded or both, got `{s}`"))),
        }
    }
}

/// One Monte Carlo scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub design: DesignSpec,
    pub truth: ScenarioTruth,
    pub n1: u64,
    pub modes: ModeSelection,
    pub replications: u64,
    pub base_seed: u64,
    pub label: String,
    /// Safety cap; [`default_max_n`] when `None`.
    pub max_n: Option<u64>,
}

impl Scenario {
    pub fn new(v: f64, truth: ScenarioTruth) -> Self {
        Self {
            design: DesignSpec::Direct(v),
            truth,
            n1: 10,
            modes: ModeSelection::Both,
            replications: 10_000,
            base_seed: DEFAULT_SEED,
            label: String::new(),
            max_n: None,
        }
    }

    pub fn with_modes(mut self, modes: ModeSelection) -> Self {
        self.modes = modes;
        self
    }
    pub fn with_replications(mut self, r: u64) -> Self {
        self.replications = r;
        self
    }
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }
    pub fn with_n1(mut self, n1: u64) -> Self {
        self.n1 = n1;
        self
    }
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn v(&self) -> f64 {
        self.design.v()
    }

    pub fn n_req(&self) -> f64 {
        self.truth.n_req(self.v())
    }

    pub fn max_n(&self) -> u64 {
        self.max_n.unwrap_or_else(|| default_max_n(self.v(), self.n1, &self.truth))
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::domain("replications must be >= 1"));
        }
        if self.n1 < 2 {
            return Err(Error::domain(format!("n1={} must be >= 2", self.n1)));
        }
        let v = self.v();
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("v {v} must be positive and finite")));
        }
        if self.max_n() <= self.n1 {
            return Err(Error::domain("max_n must exceed n1"));
        }
        Ok(())
    }
}

/// Exact integer power sums of the stopping sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactMoments {
    pub count: u64,
    pub s1: u128,
    pub s2: u128,
    pub s3: u128,
    pub s4: u128,
}

impl ExactMoments {
    pub fn push(&mut self, n: u64) {
        let n = n as u128;
        self.count += 1;
        self.s1 += n;
        self.s2 += n * n;
        self.s3 += n * n * n;
        self.s4 += n * n * n * n;
    }

    pub fn merge(mut self, other: &Self) -> Self {
        self.count += other.count;
        self.s1 += other.s1;
        self.s2 += other.s2;
        self.s3 += other.s3;
        self.s4 += other.s4;
        self
    }

    pub fn mean(&self) -> f64 {
        self.s1 as f64 / self.count as f64
    }

    pub fn mean_sq(&self) -> f64 {
        self.s2 as f64 / self.count as f64
    }

    /// Sample SD with divisor `R - 1`; zero for a single replication.
    pub fn sd(&self) -> f64 {
        central_sd(self.count, self.s1, self.s2)
    }

    /// Sample SD of the squared stopping sizes.
    pub fn sd_of_squares(&self) -> f64 {
        central_sd(self.count, self.s2, self.s4)
    }
}

fn central_sd(count: u64, sum: u128, sum_sq: u128) -> f64 {
    if count < 2 {
        return 0.0;
    }
    let r = count as u128;
    // R * Σx² - (Σx)², exact
    let num = r * sum_sq - sum * sum;
    (num as f64 / (r * (r - 1)) as f64).sqrt()
}

/// Aggregate of one scenario under one monitoring mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSummary {
    pub label: String,
    pub mode: Mode,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma: f64,
    pub v: f64,
    pub n_req: f64,
    pub n1: u64,
    pub replications: u64,
    pub mean_n: f64,
    /// Sample SD of the stopping sizes (not divided by √R).
    pub sd_n: f64,
    pub ratio: f64,
    pub bound_table: f64,
    pub bound_theorem: f64,
    pub cap_hits: u64,
    pub moments: ExactMoments,
}

impl ScenarioSummary {
    pub fn mean_n_sq(&self) -> f64 {
        self.moments.mean_sq()
    }
    /// Monte Carlo standard error of `mean_n`.
    pub fn se_mean(&self) -> f64 {
        self.sd_n / (self.replications as f64).sqrt()
    }
    /// Monte Carlo standard error of the mean of `N²`.
    pub fn se_mean_sq(&self) -> f64 {
        self.moments.sd_of_squares() / (self.replications as f64).sqrt()
    }
}
