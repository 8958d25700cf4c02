//! Fixed-sample design quantities.

use crate::distributions::normal_quantile;
use crate::error::{Error, Result};

/// One-sided design `(α, β, δ_a)` together with the derived per-unit-variance
/// sample size `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignParams {
    alpha: f64,
    beta: f64,
    delta_a: f64,
    v: f64,
}

impl DesignParams {
    pub fn new(alpha: f64, beta: f64, delta_a: f64) -> Result<Self> {
        let v = compute_v(alpha, beta, delta_a)?;
        Ok(Self { alpha, beta, delta_a, v })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn delta_a(&self) -> f64 {
        self.delta_a
    }
    pub fn v(&self) -> f64 {
        self.v
    }
}

/// `v = 2 (Φ⁻¹(1-α) + Φ⁻¹(1-β))² / δ_a²`.
pub fn compute_v(alpha: f64, beta: f64, delta_a: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::domain(format!("alpha {alpha} not in (0, 0.5)")));
    }
    if !(beta > 0.0 && beta <= 0.5) {
        return Err(Error::domain(format!("beta {beta} not in (0, 0.5]")));
    }
    if !(delta_a > 0.0 && delta_a.is_finite()) {
        return Err(Error::domain(format!("delta_a {delta_a} must be positive")));
    }
    let z = normal_quantile(1.0 - alpha)? + normal_quantile(1.0 - beta)?;
    Ok(2.0 * z * z / (delta_a * delta_a))
}

/// Per-group fixed-sample size `v σ²`, kept real-valued.
pub fn n_req(v: f64, sigma: f64) -> f64 {
    v * sigma * sigma
}

/// The data-generating truth of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioTruth {
    mu1: f64,
    mu2: f64,
    sigma: f64,
}

impl ScenarioTruth {
    pub fn new(mu1: f64, mu2: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma {sigma} must be positive and finite")));
        }
        if !mu1.is_finite() || !mu2.is_finite() {
            return Err(Error::domain("group means must be finite"));
        }
        Ok(Self { mu1, mu2, sigma })
    }

    pub fn mu1(&self) -> f64 {
        self.mu1
    }
    pub fn mu2(&self) -> f64 {
        self.mu2
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }
    /// `δ = μ₁ - μ₂`.
    pub fn delta(&self) -> f64 {
        self.mu1 - self.mu2
    }
    /// Blinding cost `δ² / (4σ²)`.
    pub fn blinding_cost(&self) -> f64 {
        let d = self.delta();
        d * d / (4.0 * self.variance())
    }
    pub fn n_req(&self, v: f64) -> f64 {
        n_req(v, self.sigma)
    }
}
