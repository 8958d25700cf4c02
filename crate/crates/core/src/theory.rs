//! Closed-form bounds and asymptotic targets for the blinded stopping size.

use std::fmt;
use std::str::FromStr;

use crate::design::ScenarioTruth;
use crate::distributions::NoncentralChiSq;
use crate::error::{Error, Result};

/// Which reading of the mean bound to evaluate.
///
/// `Theorem` is `n1 + v σ² + v δ²/4`. `Table` replaces `n1` by `1.5`, which
/// is the column printed next to the simulated means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    Theorem,
    Table,
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundVariant::Theorem => "theorem",
            BoundVariant::Table => "table",
        })
    }
}

impl FromStr for BoundVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(BoundVariant::Theorem),
            "table" => Ok(BoundVariant::Table),
            _ => Err(Error::domain(format!("unknown bound variant `{s}`"))),
        }
    }
}

fn check_bound_inputs(n1: u64, v: f64, sigma: f64) -> Result<()> {
    if n1 < 2 {
        return Err(Error::domain(format!("n1={n1} must be >= 2")));
    }
    if !(v > 0.0) || !(sigma > 0.0) {
        return Err(Error::domain("v and sigma must be positive"));
    }
    Ok(())
}

/// Upper bound on the expected blinded stopping size.
pub fn mean_bound(n1: u64, v: f64, sigma: f64, mu1: f64, mu2: f64, variant: BoundVariant) -> Result<f64> {
    check_bound_inputs(n1, v, sigma)?;
    let d = mu1 - mu2;
    let base = match variant {
        BoundVariant::Theorem => n1 as f64,
        BoundVariant::Table => 1.5,
    };
    Ok(base + v * sigma * sigma + v * d * d / 4.0)
}

/// Upper bound on the second moment of the blinded stopping size.
pub fn second_moment_bound(n1: u64, v: f64, sigma: f64, mu1: f64, mu2: f64) -> Result<f64> {
    let m = mean_bound(n1, v, sigma, mu1, mu2, BoundVariant::Theorem)?;
    Ok(m * m)
}

/// Parameters of the lower-tail bound on `P(N_b <= ε a)`, `a = n_req`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParams {
    pub n1: u64,
    pub a: f64,
    pub epsilon: f64,
    pub q: f64,
}

impl TailParams {
    /// `q` defaults to the midpoint of `(ε, 1)`.
    pub fn new(n1: u64, a: f64, epsilon: f64, q: Option<f64>) -> Result<Self> {
        let q = q.unwrap_or((epsilon + 1.0) / 2.0);
        let p = Self { n1, a, epsilon, q };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.n1 < 2 {
            return Err(Error::domain(format!("tail bound: n1 >= 2 violated (n1={})", self.n1)));
        }
        if !(self.a > 0.0) {
            return Err(Error::domain(format!("tail bound: a > 0 violated (a={})", self.a)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < self.q) {
            return Err(Error::domain(format!(
                "tail bound: 0 < epsilon < q violated (epsilon={}, q={})",
                self.epsilon, self.q
            )));
        }
        if !(self.q < 1.0) {
            return Err(Error::domain(format!("tail bound: q < 1 violated (q={})", self.q)));
        }
        let last = self.last_index() as f64;
        if !(self.epsilon * self.a < last) {
            return Err(Error::domain(format!(
                "tail bound: epsilon*a < floor(q*a) - 1 violated ({} >= {})",
                self.epsilon * self.a,
                last
            )));
        }
        Ok(())
    }

    /// `floor(q a) - 1`, the last summation index.
    pub fn last_index(&self) -> i64 {
        (self.q * self.a).floor() as i64 - 1
    }

    fn indices(&self) -> impl Iterator<Item = u64> {
        let last = self.last_index();
        let first = self.n1 as i64;
        (first..=last).map(|n| n as u64)
    }
}

/// `Σ_{n=n1}^{floor(qa)-1} (exp(1 - n/a) n/a)^{(2n-1)/2}`.
pub fn tail_bound_sum(params: &TailParams) -> Result<f64> {
    params.validate()?;
    let a = params.a;
    Ok(params
        .indices()
        .map(|n| {
            let z = n as f64 / a;
            // log of z e^{1-z}, negative for z in (0, 1)
            let log_f = z.ln() + 1.0 - z;
            ((2 * n - 1) as f64 / 2.0 * log_f).exp()
        })
        .sum())
}

/// `Σ_{n=n1}^{floor(qa)-1} P(χ²_{2n-1}(λ(n)) <= n (2n-1) / a)`, the sum the
/// exponential bound is applied to.
pub fn tail_bound_chisq<F>(params: &TailParams, lambda_fn: F) -> Result<f64>
where
    F: Fn(u64) -> f64,
{
    params.validate()?;
    let mut total = 0.0;
    for n in params.indices() {
        let dof = (2 * n - 1) as u32;
        let dist = NoncentralChiSq::new(dof, lambda_fn(n))?;
        total += dist.cdf(n as f64 * (2 * n - 1) as f64 / params.a)?;
    }
    Ok(total)
}

/// `λ(n) = n δ² / (2σ²)`.
pub fn noncentrality(truth: &ScenarioTruth) -> impl Fn(u64) -> f64 {
    let per_pair = truth.delta() * truth.delta() / (2.0 * truth.variance());
    move |n| n as f64 * per_pair
}

/// Closed-form targets for one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryTargets {
    pub n_req: f64,
    pub mean_bound_theorem: f64,
    pub mean_bound_table: f64,
    pub second_moment_bound: f64,
    /// Limit of `N_b / n_req` as σ grows.
    pub ratio_limit_sigma: f64,
    /// Limit of `N_b / n_req` as v grows: `1 + δ²/(4σ²)`.
    pub ratio_limit_v: f64,
    pub clt_center_sigma: f64,
    pub clt_var_sigma: f64,
    pub clt_center_v: f64,
    /// `(4σ² + 2δ²) / (4σ² + δ²)`.
    pub clt_var_v: f64,
}

pub fn asymptotic_targets(v: f64, sigma: f64, mu1: f64, mu2: f64, n1: u64) -> Result<TheoryTargets> {
    let truth = ScenarioTruth::new(mu1, mu2, sigma)?;
    let n_req = truth.n_req(v);
    let d2 = truth.delta() * truth.delta();
    let s2 = truth.variance();
    let ratio_limit_v = 1.0 + truth.blinding_cost();
    Ok(TheoryTargets {
        n_req,
        mean_bound_theorem: mean_bound(n1, v, sigma, mu1, mu2, BoundVariant::Theorem)?,
        mean_bound_table: mean_bound(n1, v, sigma, mu1, mu2, BoundVariant::Table)?,
        second_moment_bound: second_moment_bound(n1, v, sigma, mu1, mu2)?,
        ratio_limit_sigma: 1.0,
        ratio_limit_v,
        clt_center_sigma: n_req,
        clt_var_sigma: 1.0,
        clt_center_v: n_req * ratio_limit_v,
        clt_var_v: (4.0 * s2 + 2.0 * d2) / (4.0 * s2 + d2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::chisq_cdf;

    const SQRT10: f64 = 3.162_277_660_168_379_5;

    #[test]
    fn mean_bound_examples() {
        let th = mean_bound(10, 1.0, SQRT10, 1.0, 0.0, BoundVariant::Theorem).unwrap();
        assert!((th - 20.25).abs() < 1e-12);
        let tb = mean_bound(10, 1.0, SQRT10, 1.0, 0.0, BoundVariant::Table).unwrap();
        assert!((tb - 11.75).abs() < 1e-12);
        let tb = mean_bound(10, 10.0, 1.0, 5.0, 0.0, BoundVariant::Table).unwrap();
        assert!((tb - 74.0).abs() < 1e-12);
        assert!(mean_bound(1, 1.0, 1.0, 0.0, 0.0, BoundVariant::Table).is_err());
    }

    #[test]
    fn second_moment_examples() {
        let m = second_moment_bound(10, 1.0, SQRT10, 1.0, 0.0).unwrap();
        assert!((m - 410.0625).abs() < 1e-9);
        let m = second_moment_bound(10, 1.0, SQRT10, 0.0, 0.0).unwrap();
        assert!((m - 400.0).abs() < 1e-9);
    }

    #[test]
    fn tail_sum_reference_values() {
        // direct evaluation in double precision, independent of the log form
        let direct = |a: f64| -> f64 {
            (10..((0.75 * a).floor() as u64))
                .map(|n| ((1.0 - n as f64 / a).exp() * n as f64 / a).powf((2 * n - 1) as f64 / 2.0))
                .sum()
        };
        let p100 = TailParams::new(10, 100.0, 0.5, Some(0.75)).unwrap();
        let p1000 = TailParams::new(10, 1000.0, 0.5, Some(0.75)).unwrap();
        let s100 = tail_bound_sum(&p100).unwrap();
        let s1000 = tail_bound_sum(&p1000).unwrap();
        assert!((s100 - direct(100.0)).abs() < 1e-13);
        assert!((s1000 - direct(1000.0)).abs() < 1e-22);
        assert!(s100 > 0.0 && s100 < 1.0);
        assert!(s1000 < s100);
        // frozen from an external double-precision evaluation
        assert!((s100 - 0.229_098_002_801_613_6).abs() < 1e-12);
    }

    #[test]
    fn tail_regime_violations_are_named() {
        let e = TailParams::new(10, 4.0, 0.5, Some(0.75)).unwrap_err();
        assert!(e.to_string().contains("floor(q*a) - 1"), "{e}");
        let e = TailParams::new(10, 100.0, 0.8, Some(0.75)).unwrap_err();
        assert!(e.to_string().contains("epsilon < q"), "{e}");
        let e = TailParams::new(1, 100.0, 0.5, None).unwrap_err();
        assert!(e.to_string().contains("n1 >= 2"), "{e}");
        let e = TailParams::new(10, 100.0, 0.5, Some(1.0)).unwrap_err();
        assert!(e.to_string().contains("q < 1"), "{e}");
    }

    #[test]
    fn default_q_is_midpoint() {
        let p = TailParams::new(10, 100.0, 0.5, None).unwrap();
        assert_eq!(p.q, 0.75);
    }

    #[test]
    fn chisq_sum_zero_lambda_is_central_sum() {
        let p = TailParams::new(10, 100.0, 0.5, None).unwrap();
        let got = tail_bound_chisq(&p, |_| 0.0).unwrap();
        let want: f64 = (10..75u64).map(|n| chisq_cdf((2 * n - 1) as f64, n as f64 * (2 * n - 1) as f64 / 100.0)).sum();
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn chisq_sum_below_chernoff_sum_on_grid() {
        for &a in &[40.0, 100.0, 250.0, 1000.0] {
            for &(eps, q) in &[(0.3, 0.5), (0.5, 0.75), (0.5, 0.9), (0.8, 0.95)] {
                let Ok(p) = TailParams::new(10, a, eps, Some(q)) else { continue };
                let chernoff = tail_bound_sum(&p).unwrap();
                for &(delta, sigma2) in &[(0.0, 1.0), (1.0, 100.0), (2.0, 1.0), (5.0, 1.0)] {
                    let truth = ScenarioTruth::new(delta, 0.0, f64::sqrt(sigma2)).unwrap();
                    let exact = tail_bound_chisq(&p, noncentrality(&truth)).unwrap();
                    assert!(exact <= chernoff, "a={a} eps={eps} q={q} delta={delta}");
                }
            }
        }
    }

    #[test]
    fn targets_examples() {
        let t = asymptotic_targets(10.0, 1.0, 0.0, 0.0, 10).unwrap();
        assert_eq!(t.ratio_limit_v, 1.0);
        assert_eq!(t.clt_var_v, 1.0);
        assert_eq!(t.mean_bound_theorem, 20.0);
        assert_eq!(t.mean_bound_table, 11.5);
        let t = asymptotic_targets(10.0, 1.0, 5.0, 0.0, 10).unwrap();
        assert_eq!(t.ratio_limit_v, 7.25);
        let t = asymptotic_targets(1000.0, 1.0, 2.0, 0.0, 10).unwrap();
        assert_eq!(t.clt_var_v, 1.5);
        assert_eq!(t.clt_center_v, 2000.0);
        assert!(t.mean_bound_table <= t.mean_bound_theorem);
    }
}
