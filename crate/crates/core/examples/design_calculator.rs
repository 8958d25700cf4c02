//! Per-unit-variance sample size `v` and the fixed-sample size `n_req`
//! over a small grid of design inputs.
//!
//! ```text
//! cargo run --example design_calculator
//! ```

use blinded_monitor::design::{n_req, DesignParams};

fn main() -> blinded_monitor::Result<()> {
    println!("{:>6} {:>6} {:>8} {:>10} {:>10} {:>10}", "alpha", "beta", "delta_a", "v", "n(s=1)", "n(s=2)");
    for alpha in [0.05, 0.025, 0.005] {
        for beta in [0.2, 0.1] {
            for delta_a in [0.5, 1.0] {
                let d = DesignParams::new(alpha, beta, delta_a)?;
                println!(
                    "{alpha:>6} {beta:>6} {delta_a:>8} {:>10.4} {:>10.2} {:>10.2}",
                    d.v(),
                    n_req(d.v(), 1.0),
                    n_req(d.v(), 2.0)
                );
            }
        }
    }

    // halving the difference to detect quadruples the size
    let a = DesignParams::new(0.025, 0.2, 1.0)?.v();
    let b = DesignParams::new(0.025, 0.2, 0.5)?.v();
    println!("\nv(0.5) / v(1) = {:.6}", b / a);

    match DesignParams::new(0.0, 0.2, 1.0) {
        Ok(_) => unreachable!(),
        Err(e) => println!("alpha = 0 is rejected: {e}"),
    }
    Ok(())
}
