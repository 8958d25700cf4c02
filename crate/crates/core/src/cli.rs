//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::design::{compute_v, n_req};
use crate::error::{Error, Result};
use crate::simulation::report::{format_sig, write_records, write_summaries, write_table, DUMP_HEADER};
use crate::simulation::{load_scenarios, run_scenario, run_table, TableId, Workers, DEFAULT_SEED};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "blinded-monitor", version, about = "Blinded and unblinded continuous variance monitoring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-unit-variance sample size v and, given sigma, n_req.
    Design {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long = "delta-a")]
        delta_a: f64,
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Run the scenarios of a config file and write a summary CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Per-replication stopping sizes.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Re-simulate one of the two published tables.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn workers(k: Option<usize>) -> Result<Workers> {
    match k {
        Some(0) => Err(Error::domain("--workers must be at least 1")),
        Some(k) => Ok(Workers::fixed(k)),
        None => Ok(Workers::default()),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{}", e.render()) } else { write!(stdout, "{}", e.render()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Design { alpha, beta, delta_a, sigma } => {
            if let Some(s) = sigma {
                if !(s > 0.0 && s.is_finite()) {
                    return Err(Error::domain(format!("sigma {s} must be positive")));
                }
            }
            let v = compute_v(alpha, beta, delta_a)?;
            writeln!(stdout, "v={}", format_sig(v, 6))?;
            if let Some(s) = sigma {
                writeln!(stdout, "n_req={}", format_sig(n_req(v, s), 6))?;
            }
            Ok(EXIT_OK)
        }
        Command::Simulate { config, out, dump, workers: k } => {
            let workers = workers(k)?;
            let scenarios = load_scenarios(&config)?;
            let mut dump_writer = match &dump {
                Some(p) => {
                    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(p)?));
                    w.write_record(DUMP_HEADER)?;
                    Some(w)
                }
                None => None,
            };
            let mut rows = Vec::new();
            for s in &scenarios {
                let outcome = run_scenario(s, workers, dump_writer.is_some())?;
                if let (Some(w), Some(recs)) = (dump_writer.as_mut(), outcome.records.as_ref()) {
                    write_records(w, &s.label, s.modes, recs)?;
                }
                for sum in &outcome.summaries {
                    if sum.cap_hits > 0 {
                        writeln!(
                            stdout,
                            "warning: {} ({}) hit the sample-size cap {} times",
                            sum.label, sum.mode, sum.cap_hits
                        )?;
                    }
                }
                rows.extend(outcome.summaries);
            }
            if let Some(mut w) = dump_writer {
                w.flush()?;
            }
            write_summaries(BufWriter::new(File::create(&out)?), &rows)?;
            writeln!(stdout, "wrote {} rows to {}", rows.len(), out.display())?;
            Ok(EXIT_OK)
        }
        Command::Reproduce { table, seed, out, workers: k } => {
            let workers = workers(k)?;
            let table = TableId::from_number(table)?;
            let rows = run_table(table, seed, workers)?;
            write_table(BufWriter::new(File::create(&out)?), table, &rows)?;
            let outside = rows.iter().filter(|r| !r.blinded_check().ok()).count();
            for r in &rows {
                let c = r.blinded_check();
                writeln!(
                    stdout,
                    "{} mu1={} n_req={}: mean {:.4} (published {:.4} +- {:.3}), sd {:.4} (published {:.4})",
                    if c.ok() { "ok  " } else { "off " },
                    r.published.mu1,
                    r.published.n_req,
                    c.mean,
                    c.published_mean,
                    c.mean_tolerance,
                    c.sd,
                    c.published_sd
                )?;
            }
            writeln!(stdout, "wrote {} rows to {}; {} blinded cells outside band", rows.len(), out.display(), outside)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, seed, workers: k } => {
            let workers = workers(k)?;
            let suite: Suite = suite.parse()?;
            let checks = run_suite(suite, seed, workers)?;
            for c in &checks {
                writeln!(stdout, "{c}")?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            writeln!(stdout, "{} checks, {} failed", checks.len(), failed)?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
        }
    }
}
