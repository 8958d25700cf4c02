//! Online accumulation of paired observations.
//!
//! [`PairAccumulator`] keeps Welford-style running statistics for each arm
//! and, separately, for the pooled sequence of `2n` unlabeled observations.
//! The blinded estimator reads only the pooled fields; the per-arm fields
//! feed the unblinded estimator and the decomposition checks.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PairAccumulator {
    n: u64,
    mean_x: f64,
    mean_y: f64,
    m2_x: f64,
    m2_y: f64,
    mean_z: f64,
    m2_z: f64,
}

impl PairAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one `(x, y)` pair. The pooled sequence sees `x` then `y`.
    pub fn push_pair(&mut self, x: f64, y: f64) -> Result<()> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Input(format!("non-finite pair ({x}, {y})")));
        }
        self.push_unchecked(x, y);
        Ok(())
    }

    #[inline]
    pub(crate) fn push_unchecked(&mut self, x: f64, y: f64) {
        self.n += 1;
        let n = self.n as f64;

        let dx = x - self.mean_x;
        self.mean_x += dx / n;
        self.m2_x += dx * (x - self.mean_x);

        let dy = y - self.mean_y;
        self.mean_y += dy / n;
        self.m2_y += dy * (y - self.mean_y);

        let m = 2.0 * n;
        let dz = x - self.mean_z;
        self.mean_z += dz / (m - 1.0);
        self.m2_z += dz * (x - self.mean_z);
        let dz = y - self.mean_z;
        self.mean_z += dz / m;
        self.m2_z += dz * (y - self.mean_z);
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn mean_x(&self) -> f64 {
        self.mean_x
    }
    pub fn mean_y(&self) -> f64 {
        self.mean_y
    }
    pub fn m2_x(&self) -> f64 {
        self.m2_x
    }
    pub fn m2_y(&self) -> f64 {
        self.m2_y
    }
    pub fn mean_z(&self) -> f64 {
        self.mean_z
    }
    pub fn m2_z(&self) -> f64 {
        self.m2_z
    }

    /// Pooled variance of all `2n` observations with divisor `2n - 1`.
    pub fn blinded_variance(&self) -> Result<f64> {
        if self.n == 0 {
            return Err(Error::State("blinded variance needs at least one pair".into()));
        }
        Ok(self.blinded_unchecked())
    }

    /// Within-arm pooled variance with divisor `2n - 2`.
    pub fn unblinded_variance(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::State("unblinded variance needs at least two pairs".into()));
        }
        Ok(self.unblinded_unchecked())
    }

    #[inline]
    pub(crate) fn blinded_unchecked(&self) -> f64 {
        self.m2_z / (2 * self.n - 1) as f64
    }

    #[inline]
    pub(crate) fn unblinded_unchecked(&self) -> f64 {
        (self.m2_x + self.m2_y) / (2 * self.n - 2) as f64
    }

    /// `n (x̄ - ȳ)² / 2`, the between-arm term of the pooled sum of squares.
    pub fn between_term(&self) -> f64 {
        let d = self.mean_x - self.mean_y;
        self.n as f64 * d * d / 2.0
    }

    /// Relative residual of `m2_z = m2_x + m2_y + n (x̄ - ȳ)² / 2`.
    pub fn decomposition_residual(&self) -> f64 {
        let rhs = self.m2_x + self.m2_y + self.between_term();
        let scale = rhs.max(self.m2_z);
        if scale == 0.0 {
            0.0
        } else {
            (self.m2_z - rhs).abs() / scale
        }
    }

    /// Relative residual of `z̄ = (x̄ + ȳ) / 2`, scaled by `|x̄| + |ȳ|`.
    pub fn pooled_mean_residual(&self) -> f64 {
        let scale = self.mean_x.abs() + self.mean_y.abs();
        if scale == 0.0 {
            self.mean_z.abs()
        } else {
            (self.mean_z - 0.5 * (self.mean_x + self.mean_y)).abs() / scale
        }
    }
}

pub fn blinded_variance(acc: &PairAccumulator) -> Result<f64> {
    acc.blinded_variance()
}

pub fn unblinded_variance(acc: &PairAccumulator) -> Result<f64> {
    acc.unblinded_variance()
}
