//! Unblinded stopping depends on the data only through standardized
//! residuals, so parameter sets with the same `n_req` stop at the same `n`
//! on a shared stream. Blinded stopping does not.

use blinded_monitor::monitoring::Mode;
use blinded_monitor::simulation::invariance::{standard_sets, ParameterSet};
use blinded_monitor::simulation::{invariance_harness, Workers};

fn main() -> blinded_monitor::Result<()> {
    let n_req = 100.0;
    let mut sets = standard_sets(n_req);
    sets.push(ParameterSet::new(25.0, 2.0, -3.0, 4.0));
    for s in &sets {
        println!("v = {:>5}, sigma = {:>4}, mu = ({}, {})", s.v, s.sigma, s.mu1, s.mu2);
    }
    for mode in [Mode::Unblinded, Mode::Blinded] {
        let rep = invariance_harness(n_req, &sets, mode, 10, 2000, 5, Workers::default())?;
        print!("{mode}: {} of {} replications differ", rep.divergent.len(), rep.replications);
        match rep.divergent.first() {
            Some(d) => println!("; e.g. replication {} stops at {:?}", d.replication, d.n_stops),
            None => println!(),
        }
    }
    Ok(())
}
