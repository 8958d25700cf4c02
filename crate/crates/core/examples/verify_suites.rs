//! Runs one verification suite (default `identity`) and prints each check.
//!
//! ```text
//! cargo run --release --example verify_suites -- tail
//! ```

use blinded_monitor::simulation::{Workers, DEFAULT_SEED};
use blinded_monitor::verify::{run_suite, Suite};

fn main() -> blinded_monitor::Result<()> {
    let suite: Suite = std::env::args().nth(1).as_deref().unwrap_or("identity").parse()?;
    let checks = run_suite(suite, DEFAULT_SEED, Workers::default())?;
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
    Ok(())
}
