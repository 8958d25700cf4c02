//! Kolmogorov-Smirnov statistics and the asymptotic Kolmogorov p-value.

/// Outcome of a KS test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    /// Effective sample size (`n` or `nm / (n + m)`).
    pub n_eff: f64,
    pub p_value: f64,
}

impl KsOutcome {
    fn new(statistic: f64, n_eff: f64) -> Self {
        Self { statistic, n_eff, p_value: kolmogorov_p_value(statistic, n_eff) }
    }

    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }

    /// Large-sample critical value of the statistic at `level`.
    pub fn critical_value(&self, level: f64) -> f64 {
        let c = (-0.5 * (level / 2.0).ln()).sqrt();
        c / self.n_eff.sqrt()
    }
}

/// `Q_KS(λ) = 2 Σ (-1)^{k-1} exp(-2 k² λ²)`.
fn q_ks(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value with the Stephens small-sample correction.
pub fn kolmogorov_p_value(d: f64, n_eff: f64) -> f64 {
    let sn = n_eff.sqrt();
    q_ks((sn + 0.12 + 0.11 / sn) * d)
}

/// One-sample statistic `sup |F_n - F|` for a continuous `cdf`.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> KsOutcome {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let lo = f - i as f64 / n;
            let hi = (i + 1) as f64 / n - f;
            lo.max(hi)
        })
        .fold(0.0, f64::max);
    KsOutcome::new(d, n)
}

/// Two-sample statistic `sup |F_n - G_m|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsOutcome {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let (n, m) = (n as f64, m as f64);
    KsOutcome::new(d, n * m / (n + m))
}
