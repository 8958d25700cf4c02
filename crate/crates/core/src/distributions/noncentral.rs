//! Noncentral chi-squared law: CDF by Poisson mixture, sampler by
//! construction.

use super::gamma::{chisq_cdf, ln_gamma};
use super::normal::sample_standard_normal;
use super::rng::RngStream;
use crate::error::{Error, Result};

/// Poisson tail mass below which the mixture series is cut.
pub const SERIES_TAIL_MASS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncentralChiSq {
    dof: u32,
    lambda: f64,
}

impl NoncentralChiSq {
    pub fn new(dof: u32, lambda: f64) -> Result<Self> {
        if dof == 0 {
            return Err(Error::domain("chi-squared degrees of freedom must be >= 1"));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("noncentrality {lambda} must be finite and >= 0")));
        }
        Ok(Self { dof, lambda })
    }

    pub fn central(dof: u32) -> Result<Self> {
        Self::new(dof, 0.0)
    }

    pub fn dof(&self) -> u32 {
        self.dof
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean(&self) -> f64 {
        self.dof as f64 + self.lambda
    }

    /// P(X <= x).
    ///
    /// Sums Poisson(λ/2) weights times central CDFs with `dof + 2k` degrees
    /// of freedom, starting at the Poisson mode and walking outwards until
    /// the unvisited Poisson mass drops below [`SERIES_TAIL_MASS`].
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain(format!("chi-squared argument {x} must be >= 0")));
        }
        let k = self.dof as f64;
        if self.lambda == 0.0 {
            return Ok(chisq_cdf(k, x));
        }
        let mu = 0.5 * self.lambda;
        let mode = mu.floor();
        let log_w_mode = mode * mu.ln() - mu - ln_gamma(mode + 1.0);
        let w_mode = log_w_mode.exp();

        let mut mass = w_mode;
        let mut total = w_mode * chisq_cdf(k + 2.0 * mode, x);

        // downward: every term down to j = 0
        let mut w = w_mode;
        let mut j = mode;
        while j > 0.0 {
            w *= j / mu;
            j -= 1.0;
            mass += w;
            total += w * chisq_cdf(k + 2.0 * j, x);
            if w < f64::MIN_POSITIVE {
                break;
            }
        }

        // upward until the remaining mass is negligible
        let mut w = w_mode;
        let mut j = mode;
        while 1.0 - mass >= SERIES_TAIL_MASS {
            j += 1.0;
            w *= mu / j;
            mass += w;
            let term = chisq_cdf(k + 2.0 * j, x);
            total += w * term;
            // the central CDF decreases in j, so the tail contributes at most
            // term * (1 - mass)
            if term == 0.0 || (w < f64::MIN_POSITIVE && j > mu) {
                break;
            }
        }
        Ok(total.clamp(0.0, 1.0))
    }

    /// One draw as a central chi-squared with `dof + 2K` degrees of freedom,
    /// `K ~ Poisson(λ/2)`, realised as a sum of squared standard normals.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let extra = if self.lambda > 0.0 { sample_poisson(0.5 * self.lambda, rng) } else { 0 };
        let terms = self.dof as u64 + 2 * extra;
        (0..terms)
            .map(|_| {
                let z = sample_standard_normal(rng);
                z * z
            })
            .sum()
    }
}

/// Poisson draw by sequential inversion; adequate for the small means used
/// here.
fn sample_poisson(mean: f64, rng: &mut RngStream) -> u64 {
    let u = rng.next_open01();
    let mut k = 0u64;
    let mut p = (-mean).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
        if p == 0.0 && k as f64 > mean {
            break;
        }
    }
    k
}

pub fn noncentral_chisq_cdf(dist: &NoncentralChiSq, x: f64) -> Result<f64> {
    dist.cdf(x)
}

pub fn sample_noncentral_chisq(dist: &NoncentralChiSq, rng: &mut RngStream) -> f64 {
    dist.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(NoncentralChiSq::new(0, 1.0).is_err());
        assert!(NoncentralChiSq::new(3, -1.0).is_err());
        assert!(NoncentralChiSq::new(3, f64::NAN).is_err());
        let d = NoncentralChiSq::new(3, 1.0).unwrap();
        assert!(d.cdf(-0.5).is_err());
    }

    #[test]
    fn two_dof_central_median() {
        let d = NoncentralChiSq::central(2).unwrap();
        let x = 2.0 * std::f64::consts::LN_2;
        assert!((d.cdf(x).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn zero_lambda_is_central() {
        for dof in [1u32, 2, 5, 19, 59, 199] {
            let d = NoncentralChiSq::new(dof, 0.0).unwrap();
            for &x in &[0.0, 0.3, dof as f64 * 0.7, dof as f64, dof as f64 * 1.6] {
                let want = chisq_cdf(dof as f64, x);
                assert!((d.cdf(x).unwrap() - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn monotone_in_x_and_lambda() {
        for dof in [1u32, 7, 19, 59] {
            let mut prev_row: Option<Vec<f64>> = None;
            for lambda in [0.0, 0.5, 2.5, 10.0, 40.0] {
                let d = NoncentralChiSq::new(dof, lambda).unwrap();
                let row: Vec<f64> = (0..80).map(|i| d.cdf(i as f64 * 1.5).unwrap()).collect();
                assert!(row.windows(2).all(|w| w[0] <= w[1] + 1e-15));
                assert!(row.iter().all(|&p| (0.0..=1.0).contains(&p)));
                if let Some(prev) = &prev_row {
                    let worst = row.iter().zip(prev).map(|(a, b)| a - b).fold(f64::MIN, f64::max);
                    assert!(worst <= 2.0 * SERIES_TAIL_MASS, "dof={dof} lambda={lambda} worst={worst:e}");
                }
                prev_row = Some(row);
            }
        }
    }

    #[test]
    fn handles_large_noncentrality() {
        // mean 1500 + 59, sd ~ sqrt(2*(59 + 3000))
        let d = NoncentralChiSq::new(59, 1500.0).unwrap();
        let c = d.cdf(1559.0).unwrap();
        assert!((c - 0.5).abs() < 0.03, "{c}");
        assert!(d.cdf(1000.0).unwrap() < 1e-12);
        assert!(d.cdf(3000.0).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn sampler_means() {
        let mut rng = RngStream::new(99, 0);
        let n = 1_000_000;
        let d = NoncentralChiSq::central(1).unwrap();
        let mean: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");

        let d = NoncentralChiSq::new(19, 2.5).unwrap();
        let mean: f64 = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 21.5).abs() < 0.05, "{mean}");
    }
}
