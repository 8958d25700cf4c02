//! Feeding recorded pairs through the stopping rule.
//!
//! Reads whitespace-separated `x y` lines from a file, or uses a built-in
//! stream, and reports where each rule stops.
//!
//! ```text
//! cargo run --example replay_stream -- [pairs.txt] [v] [n1]
//! ```

use blinded_monitor::monitoring::{run_on_stream, Mode, MonitorConfig};
use blinded_monitor::Error;

fn builtin() -> Vec<(f64, f64)> {
    // wide early spread, then the data settle down
    let mut pairs: Vec<(f64, f64)> = (0..10).map(|i| if i % 2 == 0 { (-3.75, 3.75) } else { (3.75, -3.75) }).collect();
    pairs.extend([(-0.2, 0.2), (0.2, -0.2), (0.0, 0.0)]);
    pairs.extend(std::iter::repeat_n((0.0, 0.0), 12));
    pairs
}

fn read_pairs(path: &str) -> Result<Vec<(f64, f64)>, Box<dyn std::error::Error>> {
    let mut out = Vec::new();
    for (i, line) in std::fs::read_to_string(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<f64> = line.split_whitespace().map(str::parse).collect::<Result<_, _>>()?;
        match nums[..] {
            [x, y] => out.push((x, y)),
            _ => return Err(format!("line {}: expected two numbers", i + 1).into()),
        }
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let pairs = match args.first() {
        Some(p) => read_pairs(p)?,
        None => builtin(),
    };
    let v: f64 = args.get(1).map_or(Ok(1.0), |s| s.parse())?;
    let n1: u64 = args.get(2).map_or(Ok(10), |s| s.parse())?;

    for mode in [Mode::Blinded, Mode::Unblinded] {
        let cfg = MonitorConfig::new(v, n1, 1_000_000, mode)?.with_trace(true);
        match run_on_stream(&cfg, &pairs) {
            Ok(r) => println!("{mode}: stops at n = {} with estimate {:.4}", r.n_stop, r.final_variance),
            Err(Error::InsufficientData { partial }) => {
                let last = partial.trace.last();
                println!(
                    "{mode}: no stop within {} pairs; last estimate {:.4} against threshold {:.4}",
                    pairs.len(),
                    last.map_or(f64::NAN, |e| e.sigma_hat_sq),
                    last.map_or(f64::NAN, |e| e.threshold)
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}
