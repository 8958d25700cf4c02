//! Closed-form quantities: moment bounds, asymptotic targets and the two
//! lower-tail bounds.

use blinded_monitor::design::ScenarioTruth;
use blinded_monitor::theory::{
    asymptotic_targets, mean_bound, noncentrality, second_moment_bound, tail_bound_chisq, tail_bound_sum, BoundVariant,
    TailParams,
};

fn main() -> blinded_monitor::Result<()> {
    let n1 = 10;
    println!(
        "{:>6} {:>6} {:>4} {:>9} {:>9} {:>11} {:>8} {:>8}",
        "v", "sigma", "mu1", "table", "theorem", "E(N^2) <=", "ratio", "clt var"
    );
    for (v, sigma) in [(1.0, 10f64.sqrt()), (1.0, 10.0), (10.0, 1.0), (1000.0, 1.0)] {
        for mu1 in [1.0, 2.0, 5.0] {
            let t = asymptotic_targets(v, sigma, mu1, 0.0, n1)?;
            println!(
                "{v:>6} {sigma:>6.3} {mu1:>4} {:>9.2} {:>9.2} {:>11.1} {:>8.4} {:>8.4}",
                mean_bound(n1, v, sigma, mu1, 0.0, BoundVariant::Table)?,
                t.mean_bound_theorem,
                second_moment_bound(n1, v, sigma, mu1, 0.0)?,
                t.ratio_limit_v,
                t.clt_var_v
            );
        }
    }

    // P(N_b <= eps * a) at a = n_req
    let truth = ScenarioTruth::new(1.0, 0.0, 10.0)?;
    println!("\n{:>6} {:>14} {:>14}", "a", "exponential", "chi-squared");
    for a in [50.0, 100.0, 200.0, 500.0, 1000.0] {
        let p = TailParams::new(n1, a, 0.5, Some(0.75))?;
        println!("{a:>6} {:>14.6e} {:>14.6e}", tail_bound_sum(&p)?, tail_bound_chisq(&p, noncentrality(&truth))?);
    }

    if let Err(e) = TailParams::new(n1, 12.0, 0.5, None) {
        println!("\na = 12 is outside the bound's regime: {e}");
    }
    Ok(())
}
