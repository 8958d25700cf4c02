//! Numeric kernel: random substreams, the standard normal, the incomplete
//! gamma function and the noncentral chi-squared law.

mod gamma;
mod noncentral;
mod normal;
mod rng;

pub use gamma::{chisq_cdf, gamma_p, gamma_q, ln_gamma};
pub use noncentral::{noncentral_chisq_cdf, sample_noncentral_chisq, NoncentralChiSq, SERIES_TAIL_MASS};
pub use normal::{normal_cdf, normal_pdf, normal_quantile, sample_standard_normal};
pub use rng::RngStream;
