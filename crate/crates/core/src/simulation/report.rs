//! CSV output.

use std::io::Write;

use super::runner::ReplicationRecord;
use super::scenario::{ModeSelection, ScenarioSummary};
use super::tables::{TableId, TableRow};
use crate::error::Result;

pub const SUMMARY_HEADER: [&str; 15] = [
    "label",
    "mode",
    "mu1",
    "mu2",
    "sigma",
    "v",
    "n_req",
    "n1",
    "replications",
    "mean_n",
    "sd_n",
    "ratio",
    "bound_table",
    "bound_theorem",
    "cap_hits",
];

pub const DUMP_HEADER: [&str; 3] = ["label", "replication", "n_stop"];

pub const TABLE_HEADER: [&str; 17] = [
    "table",
    "mu1",
    "n_req",
    "sigma",
    "v",
    "mean_b",
    "sd_b",
    "ratio_b",
    "bound_table",
    "bound_theorem",
    "mean_u",
    "sd_u",
    "ratio_u",
    "published_mean_b",
    "published_sd_b",
    "published_mean_u",
    "published_sd_u",
];

/// Formats like C's `%.{digits}g`: shortest of fixed or exponent notation,
/// trailing zeros removed, always with a dot decimal separator.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g(x: f64) -> String {
    format_sig(x, 6)
}

pub fn write_summaries<W: Write>(out: W, rows: &[ScenarioSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for s in rows {
        w.write_record([
            s.label.clone(),
            s.mode.to_string(),
            g(s.mu1),
            g(s.mu2),
            g(s.sigma),
            g(s.v),
            g(s.n_req),
            s.n1.to_string(),
            s.replications.to_string(),
            g(s.mean_n),
            g(s.sd_n),
            g(s.ratio),
            g(s.bound_table),
            g(s.bound_theorem),
            s.cap_hits.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-replication dump. With both modes selected the label carries a
/// `:blinded` / `:unblinded` suffix so rows stay distinguishable.
pub fn write_records<W: Write>(
    out: &mut csv::Writer<W>,
    label: &str,
    modes: ModeSelection,
    records: &[ReplicationRecord],
) -> Result<()> {
    for r in records {
        let label = match modes {
            ModeSelection::Both => format!("{label}:{}", r.mode),
            _ => label.to_string(),
        };
        out.write_record([label, r.replication.to_string(), r.n_stop.to_string()])?;
    }
    Ok(())
}

pub fn write_table<W: Write>(out: W, table: TableId, rows: &[TableRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for r in rows {
        let b = &r.blinded;
        let u = &r.unblinded;
        w.write_record([
            table.number().to_string(),
            g(b.mu1),
            g(b.n_req),
            g(b.sigma),
            g(b.v),
            g(b.mean_n),
            g(b.sd_n),
            g(b.ratio),
            g(b.bound_table),
            g(b.bound_theorem),
            g(u.mean_n),
            g(u.sd_n),
            g(u.ratio),
            g(r.published.mean_b),
            g(r.published.sd_b),
            g(r.published.mean_u),
            g(r.published.sd_u),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digits_like_printf_g() {
        assert_eq!(format_sig(15.697_897_4, 6), "15.6979");
        assert_eq!(format_sig(62.791_589_6, 6), "62.7916");
        assert_eq!(format_sig(1000.0, 6), "1000");
        assert_eq!(format_sig(0.5, 6), "0.5");
        assert_eq!(format_sig(1234567.0, 6), "1.23457e+06");
        assert_eq!(format_sig(999_999.7, 6), "1e+06");
        assert_eq!(format_sig(0.000_012_345_67, 6), "1.23457e-05");
        assert_eq!(format_sig(0.000_123_456_7, 6), "0.000123457");
        assert_eq!(format_sig(-2.5, 6), "-2.5");
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(3.162_277_66, 6), "3.16228");
    }

    #[test]
    fn labels_are_quoted() {
        let s = ScenarioSummary {
            label: "a,\"b\"".into(),
            mode: crate::monitoring::Mode::Blinded,
            mu1: 1.0,
            mu2: 0.0,
            sigma: 1.0,
            v: 1.0,
            n_req: 1.0,
            n1: 10,
            replications: 1,
            mean_n: 10.0,
            sd_n: 0.0,
            ratio: 10.0,
            bound_table: 2.75,
            bound_theorem: 11.25,
            cap_hits: 0,
            moments: Default::default(),
        };
        let mut buf = Vec::new();
        write_summaries(&mut buf, &[s]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), SUMMARY_HEADER.join(","));
        assert_eq!(lines.next().unwrap(), "\"a,\"\"b\"\"\",blinded,1,0,1,1,1,10,1,10,0,10,2.75,11.25,0");
    }
}
