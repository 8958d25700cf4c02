//! Scenarios from a config file, summarized as CSV on stdout.
//!
//! ```text
//! cargo run --release --example scenario_file -- [scenarios.cfg]
//! ```

use std::path::Path;

use blinded_monitor::simulation::report::write_summaries;
use blinded_monitor::simulation::{load_scenarios, parse_scenarios, run_scenario, Workers};

const DEFAULT: &str = "\
# the same truth monitored under three designs
[small]
v = 1
mu1 = 1
sigma = 5
replications = 2000

[powered]
alpha = 0.025
beta = 0.2
delta_a = 1
mu1 = 1
sigma = 2
replications = 2000

[large-effect]
v = 10
mu1 = 5
sigma = 1
mode = blinded
replications = 2000
";

fn main() -> blinded_monitor::Result<()> {
    let scenarios = match std::env::args().nth(1) {
        Some(p) => load_scenarios(Path::new(&p))?,
        None => parse_scenarios(DEFAULT, Path::new("<built-in>"))?,
    };
    let mut rows = Vec::new();
    for s in &scenarios {
        rows.extend(run_scenario(s, Workers::default(), false)?.summaries);
    }
    write_summaries(std::io::stdout().lock(), &rows)
}
