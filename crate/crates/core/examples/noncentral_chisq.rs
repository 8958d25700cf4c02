//! The law of the scaled blinded variance.
//!
//! `(2n - 1) * blinded / σ²` is noncentral chi-squared with `2n - 1`
//! degrees of freedom and noncentrality `n δ² / (2σ²)`. This compares a
//! simulated sample with the series CDF and with the direct sampler.

use blinded_monitor::design::ScenarioTruth;
use blinded_monitor::distributions::{NoncentralChiSq, RngStream};
use blinded_monitor::simulation::{blinded_variance_law, Workers};

fn main() -> blinded_monitor::Result<()> {
    let d = NoncentralChiSq::new(19, 2.5)?;
    println!("chi2_19(2.5): mean {}", d.mean());
    for x in [10.0, 15.0, 19.0, 21.5, 30.0, 40.0] {
        println!("  P(X <= {x:>4}) = {:.8}", d.cdf(x)?);
    }
    let mut rng = RngStream::new(1, 0);
    let draws: Vec<f64> = (0..5).map(|_| d.sample(&mut rng)).collect();
    println!("  five draws: {draws:.3?}");

    let truth = ScenarioTruth::new(1.0, 0.0, 1.0)?;
    let rep = blinded_variance_law(&truth, 30, 20_000, 11, Workers::default())?;
    println!(
        "\nn = {}, lambda = {}: KS against the CDF D = {:.5} (p = {:.3}), against the sampler D = {:.5} (p = {:.3})",
        rep.n,
        rep.lambda,
        rep.versus_cdf.statistic,
        rep.versus_cdf.p_value,
        rep.versus_sampler.statistic,
        rep.versus_sampler.p_value
    );
    Ok(())
}
