//! The two published simulation grids and their reported values.

use super::runner::{run_scenario, Workers};
use super::scenario::{ModeSelection, Scenario, ScenarioSummary};
use crate::design::ScenarioTruth;
use crate::error::{Error, Result};
use crate::monitoring::Mode;

pub const TABLE_REPLICATIONS: u64 = 10_000;
pub const TABLE_N1: u64 = 10;
pub const N_REQ_LADDER: [f64; 5] = [10.0, 50.0, 100.0, 500.0, 1000.0];
pub const MU1_VALUES: [f64; 3] = [1.0, 2.0, 5.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// v = 1 fixed, σ varies.
    SigmaGrid = 1,
    /// σ = 1 fixed, v varies.
    VGrid = 2,
}

impl TableId {
    pub fn from_number(id: u8) -> Result<Self> {
        match id {
            1 => Ok(TableId::SigmaGrid),
            2 => Ok(TableId::VGrid),
            _ => Err(Error::domain(format!("table id must be 1 or 2, got {id}"))),
        }
    }

    pub fn number(&self) -> u8 {
        *self as u8
    }

    pub fn published(&self) -> &'static [PublishedRow; 15] {
        match self {
            TableId::SigmaGrid => &TABLE_1,
            TableId::VGrid => &TABLE_2,
        }
    }

    /// `(v, σ)` for a given `n_req` on this grid.
    pub fn design_point(&self, n_req: f64) -> (f64, f64) {
        match self {
            TableId::SigmaGrid => (1.0, n_req.sqrt()),
            TableId::VGrid => (n_req, 1.0),
        }
    }
}

/// One printed row: blinded mean/SD/ratio, the bound column, and the
/// unblinded mean/SD/ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub mu1: f64,
    pub n_req: f64,
    pub mean_b: f64,
    pub sd_b: f64,
    pub ratio_b: f64,
    pub bound: f64,
    pub mean_u: f64,
    pub sd_u: f64,
    pub ratio_u: f64,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    mu1: f64,
    n_req: f64,
    mean_b: f64,
    sd_b: f64,
    ratio_b: f64,
    bound: f64,
    mean_u: f64,
    sd_u: f64,
    ratio_u: f64,
) -> PublishedRow {
    PublishedRow { mu1, n_req, mean_b, sd_b, ratio_b, bound, mean_u, sd_u, ratio_u }
}

#[rustfmt::skip]
pub static TABLE_1: [PublishedRow; 15] = [
    row(1.0, 10.0, 11.4037, 1.8735, 1.1404, 11.75, 11.2955, 1.8238, 1.1296),
    row(1.0, 50.0, 49.9064, 7.3498, 0.9981, 51.75, 49.7201, 7.3623, 0.9944),
    row(1.0, 100.0, 99.9400, 10.1021, 0.9994, 101.75, 99.5718, 10.1720, 0.9957),
    row(1.0, 500.0, 500.1991, 22.3504, 1.0004, 501.75, 499.9163, 22.1464, 0.9998),
    row(1.0, 1000.0, 1000.0603, 31.4952, 1.0001, 1001.75, 999.9493, 31.5001, 0.9999),
    row(2.0, 10.0, 11.9195, 2.2187, 1.1920, 12.5, 11.2955, 1.8238, 1.1296),
    row(2.0, 50.0, 50.7311, 7.4199, 1.0146, 52.5, 49.7201, 7.3623, 0.9944),
    row(2.0, 100.0, 100.6331, 10.1656, 1.0063, 102.5, 99.5718, 10.1720, 0.9957),
    row(2.0, 500.0, 500.9419, 22.3626, 1.0019, 502.5, 499.9163, 22.1464, 0.9998),
    row(2.0, 1000.0, 1000.8652, 31.5596, 1.0009, 1002.5, 999.9493, 31.5001, 0.9999),
    row(5.0, 10.0, 16.4330, 3.7084, 1.6433, 17.75, 11.2955, 1.8238, 1.1296),
    row(5.0, 50.0, 56.0726, 7.6538, 1.1215, 57.75, 49.7201, 7.3623, 0.9944),
    row(5.0, 100.0, 106.0004, 10.3054, 1.0600, 107.75, 99.5718, 10.1720, 0.9957),
    row(5.0, 500.0, 506.1834, 22.5512, 1.0124, 507.75, 499.9163, 22.1464, 0.9998),
    row(5.0, 1000.0, 1006.0055, 31.5900, 1.0060, 1007.75, 999.9493, 31.5001, 0.9999),
];

#[rustfmt::skip]
pub static TABLE_2: [PublishedRow; 15] = [
    row(1.0, 10.0, 13.0250, 2.7759, 1.3025, 14.0, 11.2955, 1.8238, 1.1296),
    row(1.0, 50.0, 62.4143, 7.9760, 1.2483, 64.0, 49.7201, 7.3623, 0.9944),
    row(1.0, 100.0, 124.9483, 10.9901, 1.2495, 126.5, 99.5718, 10.1720, 0.9957),
    row(1.0, 500.0, 624.8957, 24.2892, 1.2498, 626.5, 499.9163, 22.1464, 0.9998),
    row(1.0, 1000.0, 1249.7079, 34.0695, 1.2497, 1251.5, 999.9493, 31.5001, 0.9999),
    row(2.0, 10.0, 20.2562, 4.0676, 2.0256, 21.5, 11.2955, 1.8238, 1.1296),
    row(2.0, 50.0, 100.2653, 8.7786, 2.0053, 101.5, 49.7201, 7.3623, 0.9944),
    row(2.0, 100.0, 200.3337, 12.2293, 2.0033, 201.5, 99.5718, 10.1720, 0.9957),
    row(2.0, 500.0, 1000.0871, 27.1989, 2.0002, 1001.5, 499.9163, 22.1464, 0.9998),
    row(2.0, 1000.0, 2000.5408, 38.4516, 2.0005, 2001.5, 999.9493, 31.5001, 0.9999),
    row(5.0, 10.0, 73.3414, 4.3575, 7.3341, 74.0, 11.2955, 1.8238, 1.1296),
    row(5.0, 50.0, 363.3671, 9.6653, 7.2673, 364.0, 49.7201, 7.3623, 0.9944),
    row(5.0, 100.0, 725.7457, 13.6278, 7.2575, 726.5, 99.5718, 10.1720, 0.9957),
    row(5.0, 500.0, 3626.0818, 30.3324, 7.2522, 3626.5, 499.9163, 22.1464, 0.9998),
    row(5.0, 1000.0, 7251.0777, 42.9622, 7.2511, 7251.5, 999.9493, 31.5001, 0.9999),
];

/// The scenario behind one published row.
pub fn table_scenario(table: TableId, mu1: f64, n_req: f64, base_seed: u64) -> Result<Scenario> {
    let (v, sigma) = table.design_point(n_req);
    let truth = ScenarioTruth::new(mu1, 0.0, sigma)?;
    Ok(Scenario::new(v, truth)
        .with_modes(ModeSelection::Both)
        .with_n1(TABLE_N1)
        .with_replications(TABLE_REPLICATIONS)
        .with_seed(base_seed)
        .with_label(format!("table{}-mu1={}-nreq={}", table.number(), mu1, n_req)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub published: PublishedRow,
    pub blinded: ScenarioSummary,
    pub unblinded: ScenarioSummary,
}

/// Simulates all 15 rows of a table, in printed order. Every row uses the
/// same base seed.
pub fn run_table(table: TableId, base_seed: u64, workers: Workers) -> Result<Vec<TableRow>> {
    run_table_with(table, base_seed, workers, TABLE_REPLICATIONS)
}

pub fn run_table_with(table: TableId, base_seed: u64, workers: Workers, replications: u64) -> Result<Vec<TableRow>> {
    table
        .published()
        .iter()
        .map(|p| {
            let s = table_scenario(table, p.mu1, p.n_req, base_seed)?.with_replications(replications);
            let out = run_scenario(&s, workers, false)?;
            Ok(TableRow {
                published: *p,
                blinded: out.summary(Mode::Blinded).cloned().expect("both modes run"),
                unblinded: out.summary(Mode::Unblinded).cloned().expect("both modes run"),
            })
        })
        .collect()
}


/// Agreement of one simulated cell with its published counterpart: the mean
/// within `4 s / √R` and the SD within 10% of the published `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellCheck {
    pub published_mean: f64,
    pub published_sd: f64,
    pub mean: f64,
    pub sd: f64,
    pub mean_tolerance: f64,
}

pub const SD_RELATIVE_TOLERANCE: f64 = 0.10;

impl CellCheck {
    pub fn new(published_mean: f64, published_sd: f64, sim: &ScenarioSummary) -> Self {
        Self {
            published_mean,
            published_sd,
            mean: sim.mean_n,
            sd: sim.sd_n,
            mean_tolerance: 4.0 * published_sd / (TABLE_REPLICATIONS as f64).sqrt(),
        }
    }

    pub fn mean_ok(&self) -> bool {
        (self.mean - self.published_mean).abs() <= self.mean_tolerance
    }

    pub fn sd_ok(&self) -> bool {
        (self.sd - self.published_sd).abs() <= SD_RELATIVE_TOLERANCE * self.published_sd
    }

    pub fn ok(&self) -> bool {
        self.mean_ok() && self.sd_ok()
    }
}

impl TableRow {
    pub fn blinded_check(&self) -> CellCheck {
        CellCheck::new(self.published.mean_b, self.published.sd_b, &self.blinded)
    }

    pub fn unblinded_check(&self) -> CellCheck {
        CellCheck::new(self.published.mean_u, self.published.sd_u, &self.unblinded)
    }
}
