//! Continuous monitoring of the outcome variance in two-arm trials with
//! normal outcomes.
//!
//! Pairs `(X_i, Y_i)` arrive one at a time. After every pair with
//! `n >= n1` a variance estimate is compared with `n / v`, and the first `n`
//! where the estimate does not exceed `n / v` is the per-group sample size.
//! The *blinded* rule pools all `2n` observations without group labels; the
//! *unblinded* rule averages the two within-group variances.
//!
//! The crate provides
//!
//! * [`distributions`]: random substreams, the standard normal and the
//!   noncentral chi-squared CDF and sampler,
//! * [`estimators`]: the online pair accumulator,
//! * [`design`]: `v` and `n_req`,
//! * [`monitoring`]: both stopping rules,
//! * [`theory`]: moment bounds, lower-tail bounds and asymptotic targets,
//! * [`simulation`]: the deterministic parallel Monte Carlo harness,
//! * [`verify`] and [`cli`]: verification suites and the command line.
//!
//! See the `examples/` directory for one runnable program per capability.

// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod design;
pub mod distributions;
mod error;
pub mod estimators;
pub mod monitoring;
pub mod simulation;
pub mod theory;
pub mod verify;

pub use error::{Error, Result};
