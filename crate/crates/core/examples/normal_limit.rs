//! For large `v` the standardized blinded stopping size is close to normal
//! with variance `(4σ² + 2δ²) / (4σ² + δ²)`. A wrong variance is detected.
//!
//! ```text
//! cargo run --release --example normal_limit
//! ```

use blinded_monitor::design::ScenarioTruth;
use blinded_monitor::simulation::{distribution_tests, NormalTarget, Regime, Scenario, Workers};
use blinded_monitor::theory::asymptotic_targets;

fn main() -> blinded_monitor::Result<()> {
    let v = 1000.0;
    for delta in [0.0, 1.0, 2.0] {
        let s = Scenario::new(v, ScenarioTruth::new(delta, 0.0, 1.0)?).with_replications(5000);
        let targets = asymptotic_targets(v, 1.0, delta, 0.0, s.n1)?;
        let right = NormalTarget::from_targets(&targets, Regime::V);
        let wrong = right.with_variance(if delta == 0.0 { 2.0 } else { 1.0 });
        for target in [right, wrong] {
            let rep = distribution_tests(&s, &target, Workers::default())?;
            println!(
                "delta {delta}: center {:.1}, variance {:.3}: D = {:.4}, p = {:.3e} {}",
                target.center,
                target.variance,
                rep.ks.statistic,
                rep.ks.p_value,
                if rep.passed { "fits" } else { "rejected" }
            );
        }
    }
    Ok(())
}
