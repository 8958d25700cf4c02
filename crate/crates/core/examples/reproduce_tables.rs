//! Re-simulates both published tables and compares every blinded cell
//! with its Monte Carlo band.
//!
//! ```text
//! cargo run --release --example reproduce_tables -- [seed] [replications]
//! ```

use blinded_monitor::simulation::tables::{run_table_with, TABLE_REPLICATIONS};
use blinded_monitor::simulation::{TableId, Workers, DEFAULT_SEED};

fn main() -> blinded_monitor::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let reps = args.next().and_then(|s| s.parse().ok()).unwrap_or(TABLE_REPLICATIONS);

    for table in [TableId::SigmaGrid, TableId::VGrid] {
        println!("table {} (seed {seed}, {reps} replications)", table.number());
        println!(
            "{:>4} {:>6} {:>10} {:>10} {:>8} {:>8} {:>10} {:>8}",
            "mu1", "n_req", "mean_b", "published", "sd_b", "ratio", "mean_u", "bound"
        );
        let rows = run_table_with(table, seed, Workers::default(), reps)?;
        for r in &rows {
            let c = r.blinded_check();
            println!(
                "{:>4} {:>6} {:>10.4} {:>10.4} {:>8.4} {:>8.4} {:>10.4} {:>8.2}{}",
                r.published.mu1,
                r.published.n_req,
                r.blinded.mean_n,
                r.published.mean_b,
                r.blinded.sd_n,
                r.blinded.ratio,
                r.unblinded.mean_n,
                r.blinded.bound_table,
                if c.ok() { "" } else { " <- outside band" }
            );
        }
        println!();
    }
    Ok(())
}
