//! One trial, monitored both ways on the same stream of pairs.
//!
//! Prints the estimate and threshold at every checked `n` until both rules
//! have stopped.
//!
//! ```text
//! cargo run --example stopping_rules -- [seed]
//! ```

use blinded_monitor::design::ScenarioTruth;
use blinded_monitor::distributions::{sample_standard_normal, RngStream};
use blinded_monitor::monitoring::{Mode, Monitor, MonitorConfig};

fn main() -> blinded_monitor::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    // v = 4, σ = 3: n_req = 36. δ = 2 inflates the blinded estimate.
    let (v, n1) = (4.0, 10);
    let truth = ScenarioTruth::new(2.0, 0.0, 3.0)?;
    let blinded = MonitorConfig::new(v, n1, 10_000, Mode::Blinded)?.with_trace(true);
    let mut b = Monitor::new(blinded);
    let mut u = Monitor::new(blinded.with_mode(Mode::Unblinded));

    let mut rng = RngStream::new(seed, 0);
    while !(b.is_stopped() && u.is_stopped()) {
        let x = truth.mu1() + truth.sigma() * sample_standard_normal(&mut rng);
        let y = truth.mu2() + truth.sigma() * sample_standard_normal(&mut rng);
        if !b.is_stopped() {
            b.push(x, y)?;
        }
        if !u.is_stopped() {
            u.push(x, y)?;
        }
    }
    let (b, u) = (b.into_result(), u.into_result());

    println!("n_req = {}, blinding cost = {:.4}", truth.n_req(v), truth.blinding_cost());
    println!("{:>5} {:>10} {:>10} {:>10}", "n", "blinded", "unblinded", "n/v");
    let longest = if b.trace.len() >= u.trace.len() { &b.trace } else { &u.trace };
    for (i, e) in longest.iter().enumerate() {
        let cell = |t: &[blinded_monitor::monitoring::TraceEntry]| {
            t.get(i).map_or(String::from("-"), |e| format!("{:.3}", e.sigma_hat_sq))
        };
        println!("{:>5} {:>10} {:>10} {:>10.2}", e.n, cell(&b.trace), cell(&u.trace), e.threshold);
    }
    println!("blinded stops at {}, unblinded at {}", b.n_stop, u.n_stop);
    Ok(())
}
