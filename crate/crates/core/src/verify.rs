//! Named verification suites with per-check pass/fail reporting.

use std::fmt;
use std::str::FromStr;

use crate::design::ScenarioTruth;
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::estimators::PairAccumulator;
use crate::monitoring::Mode;
use crate::simulation::invariance::standard_sets;
use crate::simulation::tables::{table_scenario, TableId, TABLE_N1};
use crate::simulation::{
    blinded_variance_law, distribution_tests, invariance_harness, lower_tail_count, run_scenario, NormalTarget, Regime,
    Scenario, Workers,
};
use crate::theory::{
    asymptotic_targets, mean_bound, noncentrality, tail_bound_chisq, tail_bound_sum, BoundVariant, TailParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identity,
    Bounds,
    Invariance,
    Normality,
    Tail,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Identity, Suite::Bounds, Suite::Invariance, Suite::Normality, Suite::Tail];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identity => "identity",
            Suite::Bounds => "bounds",
            Suite::Invariance => "invariance",
            Suite::Normality => "normality",
            Suite::Tail => "tail",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Suite::Identity),
            "bounds" => Ok(Suite::Bounds),
            "invariance" => Ok(Suite::Invariance),
            "normality" => Ok(Suite::Normality),
            "tail" => Ok(Suite::Tail),
            "all" => Ok(Suite::All),
            _ => Err(Error::domain(format!("unknown suite `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub observed: String,
    pub expected: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: observed {}; expected {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.observed,
            self.expected
        )
    }
}

fn check(suite: Suite, name: impl Into<String>, passed: bool, observed: String, expected: String) -> Check {
    Check { suite, name: name.into(), passed, observed, expected }
}

pub fn run_suite(suite: Suite, seed: u64, workers: Workers) -> Result<Vec<Check>> {
    match suite {
        Suite::Identity => identity_suite(seed),
        Suite::Bounds => bounds_suite(seed, workers),
        Suite::Invariance => invariance_suite(seed, workers),
        Suite::Normality => normality_suite(seed, workers),
        Suite::Tail => tail_suite(seed, workers),
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(run_suite(s, seed, workers)?);
            }
            Ok(all)
        }
    }
}

pub const IDENTITY_PREFIXES: u64 = 1_000;
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Worst residuals of the decomposition and pooled-mean identities over
/// random prefixes with `μ ∈ [-100, 100]`, `σ ∈ [1e-3, 1e3]`.
pub fn identity_residuals(seed: u64, prefixes: u64) -> (f64, f64) {
    let mut worst_decomp: f64 = 0.0;
    let mut worst_mean: f64 = 0.0;
    for p in 0..prefixes {
        let mut rng = RngStream::new(seed, p);
        let mu1 = -100.0 + 200.0 * rng.next_open01();
        let mu2 = -100.0 + 200.0 * rng.next_open01();
        let sigma = 10f64.powf(-3.0 + 6.0 * rng.next_open01());
        let len = 1 + (rng.next_u64() % 200);
        let truth = ScenarioTruth::new(mu1, mu2, sigma).expect("finite parameters");
        let mut acc = PairAccumulator::new();
        for _ in 0..len {
            let x = truth.mu1() + truth.sigma() * crate::distributions::sample_standard_normal(&mut rng);
            let y = truth.mu2() + truth.sigma() * crate::distributions::sample_standard_normal(&mut rng);
            acc.push_unchecked(x, y);
        }
        worst_decomp = worst_decomp.max(acc.decomposition_residual());
        worst_mean = worst_mean.max(acc.pooled_mean_residual());
    }
    (worst_decomp, worst_mean)
}

fn identity_suite(seed: u64) -> Result<Vec<Check>> {
    let (decomp, mean) = identity_residuals(seed, IDENTITY_PREFIXES);
    let want = format!("<= {IDENTITY_TOLERANCE:e} over {IDENTITY_PREFIXES} prefixes");
    Ok(vec![
        check(
            Suite::Identity,
            "m2_z = m2_x + m2_y + n(mean_x - mean_y)^2/2",
            decomp <= IDENTITY_TOLERANCE,
            format!("max relative residual {decomp:.3e}"),
            want.clone(),
        ),
        check(
            Suite::Identity,
            "mean_z = (mean_x + mean_y)/2",
            mean <= IDENTITY_TOLERANCE,
            format!("max relative residual {mean:.3e}"),
            want,
        ),
    ])
}

/// Monte Carlo check of the moment bounds: the simulated first and second moments of
/// the blinded stopping size sit at least four standard errors below
/// their bounds.
pub fn moment_bound_checks(s: &Scenario, workers: Workers) -> Result<Vec<Check>> {
    let out = run_scenario(&s.clone().with_modes(crate::simulation::ModeSelection::Blinded), workers, false)?;
    let sum = out.summary(Mode::Blinded).expect("blinded mode run");
    let t = &s.truth;
    let first = mean_bound(s.n1, s.v(), t.sigma(), t.mu1(), t.mu2(), BoundVariant::Theorem)?;
    let second = crate::theory::second_moment_bound(s.n1, s.v(), t.sigma(), t.mu1(), t.mu2())?;
    Ok(vec![
        check(
            Suite::Bounds,
            format!("{}: E(N_b) bound", s.label),
            sum.mean_n + 4.0 * sum.se_mean() < first,
            format!("mean {:.4} (se {:.4})", sum.mean_n, sum.se_mean()),
            format!("mean + 4 se < {first:.4}"),
        ),
        check(
            Suite::Bounds,
            format!("{}: E(N_b^2) bound", s.label),
            sum.mean_n_sq() + 4.0 * sum.se_mean_sq() < second,
            format!("mean of squares {:.2} (se {:.2})", sum.mean_n_sq(), sum.se_mean_sq()),
            format!("mean + 4 se < {second:.2}"),
        ),
        check(
            Suite::Bounds,
            format!("{}: no cap hits", s.label),
            sum.cap_hits == 0,
            sum.cap_hits.to_string(),
            "0".into(),
        ),
    ])
}

fn bounds_suite(seed: u64, workers: Workers) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for table in [TableId::SigmaGrid, TableId::VGrid] {
        for row in table.published() {
            let (v, sigma) = table.design_point(row.n_req);
            let tb = mean_bound(TABLE_N1, v, sigma, row.mu1, 0.0, BoundVariant::Table)?;
            let th = mean_bound(TABLE_N1, v, sigma, row.mu1, 0.0, BoundVariant::Theorem)?;
            checks.push(check(
                Suite::Bounds,
                format!("table {} mu1={} n_req={}: bound column", table.number(), row.mu1, row.n_req),
                (tb - row.bound).abs() <= 0.01 && th >= tb,
                format!("table {tb:.4}, theorem {th:.4}"),
                format!("{} +- 0.01, theorem >= table", row.bound),
            ));
        }
    }
    for (table, mu1, n_req) in
        [(TableId::SigmaGrid, 5.0, 10.0), (TableId::VGrid, 5.0, 10.0), (TableId::VGrid, 2.0, 100.0)]
    {
        checks.extend(moment_bound_checks(&table_scenario(table, mu1, n_req, seed)?, workers)?);
    }
    Ok(checks)
}

pub const INVARIANCE_REPLICATIONS: u64 = 10_000;

fn invariance_suite(seed: u64, workers: Workers) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n_req in [10.0, 100.0, 1000.0] {
        let sets = standard_sets(n_req);
        let u = invariance_harness(n_req, &sets, Mode::Unblinded, TABLE_N1, INVARIANCE_REPLICATIONS, seed, workers)?;
        let first = u.divergent.first().map(|d| format!(", first at replication {}: {:?}", d.replication, d.n_stops));
        checks.push(check(
            Suite::Invariance,
            format!("n_req={n_req}: unblinded stopping size shared by {} parameter sets", sets.len()),
            u.identical(),
            format!(
                "{}/{} identical{}",
                u.replications - u.divergent.len() as u64,
                u.replications,
                first.unwrap_or_default()
            ),
            format!("{0}/{0} identical", u.replications),
        ));
        let b = invariance_harness(n_req, &sets, Mode::Blinded, TABLE_N1, INVARIANCE_REPLICATIONS, seed, workers)?;
        checks.push(check(
            Suite::Invariance,
            format!("n_req={n_req}: blinded stopping size depends on delta/sigma"),
            !b.identical(),
            format!("{} divergent replications", b.divergent.len()),
            ">= 1 divergent replication".into(),
        ));
    }
    Ok(checks)
}

pub const LAW_N: u64 = 30;
pub const LAW_REPLICATES: u64 = 100_000;
pub const NORMALITY_V: f64 = 1000.0;
pub const NORMALITY_REPLICATIONS: u64 = 10_000;

fn normality_suite(seed: u64, workers: Workers) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let truth = ScenarioTruth::new(1.0, 0.0, 1.0)?;
    let law = blinded_variance_law(&truth, LAW_N, LAW_REPLICATES, seed, workers)?;
    checks.push(check(
        Suite::Normality,
        format!("(2n-1) blinded variance / sigma^2 at n={LAW_N} vs chi2_{}({})", 2 * LAW_N - 1, law.lambda),
        law.passes(),
        format!(
            "KS vs CDF D={:.5} p={:.3}; KS vs sampler D={:.5} p={:.3}",
            law.versus_cdf.statistic, law.versus_cdf.p_value, law.versus_sampler.statistic, law.versus_sampler.p_value
        ),
        "both p >= 0.01".into(),
    ));
    for (delta, override_var, expect_pass) in [(0.0, None, true), (2.0, None, true), (2.0, Some(1.0), false)] {
        let truth = ScenarioTruth::new(delta, 0.0, 1.0)?;
        let s = Scenario::new(NORMALITY_V, truth).with_replications(NORMALITY_REPLICATIONS).with_seed(seed);
        let targets = asymptotic_targets(NORMALITY_V, 1.0, delta, 0.0, s.n1)?;
        let mut target = NormalTarget::from_targets(&targets, Regime::V);
        if let Some(var) = override_var {
            target = target.with_variance(var);
        }
        let rep = distribution_tests(&s, &target, workers)?;
        let name = match override_var {
            None => format!("normalized N_b, v={NORMALITY_V}, delta={delta}, variance {}", target.variance),
            Some(_) => format!("negative control: delta={delta} with mis-specified variance {}", target.variance),
        };
        checks.push(check(
            Suite::Normality,
            name,
            rep.passed == expect_pass,
            format!("KS D={:.5} p={:.3e}", rep.ks.statistic, rep.ks.p_value),
            if expect_pass { "p >= 0.01".into() } else { "p < 0.01".into() },
        ));
    }
    Ok(checks)
}

/// Reference point for the lower-tail bound.
pub const TAIL_N1: u64 = 10;
pub const TAIL_N_REQ: f64 = 100.0;
pub const TAIL_EPSILON: f64 = 0.5;
pub const TAIL_Q: f64 = 0.75;
pub const TAIL_REPLICATIONS: u64 = 10_000;

fn tail_suite(seed: u64, workers: Workers) -> Result<Vec<Check>> {
    // v = 1, σ = 10, δ = 1
    let truth = ScenarioTruth::new(1.0, 0.0, TAIL_N_REQ.sqrt())?;
    let s = Scenario::new(1.0, truth).with_n1(TAIL_N1).with_replications(TAIL_REPLICATIONS).with_seed(seed);
    let limit = TAIL_EPSILON * TAIL_N_REQ;
    let hits = lower_tail_count(&s, limit, workers)?;
    let p100 = TailParams::new(TAIL_N1, TAIL_N_REQ, TAIL_EPSILON, Some(TAIL_Q))?;
    let p1000 = TailParams::new(TAIL_N1, 10.0 * TAIL_N_REQ, TAIL_EPSILON, Some(TAIL_Q))?;
    let chernoff = tail_bound_sum(&p100)?;
    let exact = tail_bound_chisq(&p100, noncentrality(&truth))?;
    let chernoff_1000 = tail_bound_sum(&p1000)?;
    let mc = hits as f64 / TAIL_REPLICATIONS as f64;
    Ok(vec![
        check(
            Suite::Tail,
            format!("MC P(N_b <= {limit})"),
            hits == 0,
            format!("{hits}/{TAIL_REPLICATIONS}"),
            format!("0/{TAIL_REPLICATIONS}"),
        ),
        check(
            Suite::Tail,
            "MC estimate <= chi-squared sum <= exponential sum",
            mc <= exact && exact <= chernoff,
            format!("{mc} <= {exact:.6e} <= {chernoff:.6e}"),
            "ordered".into(),
        ),
        check(
            Suite::Tail,
            "exponential sum decays in n_req",
            chernoff_1000 < chernoff,
            format!("a=1000: {chernoff_1000:.3e}, a=100: {chernoff:.3e}"),
            "a=1000 < a=100".into(),
        ),
    ])
}
