//! Savings grid over display resolution and saccade frequency, as CSV and
//! as gnuplot data blocks.

use saccadic_core::bitrate::{inclusive_steps, sweep};
use saccadic_core::{DisplaySpec, SavingsGrid, SimConfig};

use crate::fmt::sig6;
use crate::Result;

pub const PPD_RANGE: (f64, f64) = (30.0, 100.0);
pub const FREQ_RANGE: (f64, f64) = (1.0, 8.0);

/// The default 30..=100 ppd × 1..=8 Hz sweep.
pub fn default_grid(display: &DisplaySpec, sim: &SimConfig) -> Result<SavingsGrid> {
    let ppds = inclusive_steps(PPD_RANGE.0, PPD_RANGE.1, 1.0);
    let freqs = inclusive_steps(FREQ_RANGE.0, FREQ_RANGE.1, 1.0);
    Ok(sweep(&ppds, &freqs, display, sim)?)
}

/// One row per ppd; first column `ppd`, then one `<f>Hz` column per
/// frequency holding the savings fraction.
pub fn format_grid_csv(grid: &SavingsGrid) -> String {
    let mut out = String::from("ppd");
    for f in &grid.freqs {
        out.push_str(&format!(",{f}Hz"));
    }
    out.push('\n');
    for (ppd, row) in grid.ppds.iter().zip(&grid.savings) {
        out.push_str(&ppd.to_string());
        for v in row {
            out.push(',');
            out.push_str(&sig6(*v));
        }
        out.push('\n');
    }
    out
}

/// Parses CSV written by [`format_grid_csv`].
pub fn parse_grid_csv(text: &str) -> Result<SavingsGrid> {
    let bad = |m: &str| crate::Error::Parse(format!("grid csv: {m}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty"))?;
    let mut cols = header.split(',');
    if cols.next() != Some("ppd") {
        return Err(bad("first column must be ppd"));
    }
    let freqs = cols
        .map(|c| {
            c.strip_suffix("Hz")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad("bad frequency column"))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut ppds = Vec::new();
    let mut savings = Vec::new();
    for line in lines {
        let vals = line
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|_| bad("bad number")))
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != freqs.len() + 1 {
            return Err(bad("ragged row"));
        }
        ppds.push(vals[0]);
        savings.push(vals[1..].to_vec());
    }
    Ok(SavingsGrid { ppds, freqs, savings })
}

/// One gnuplot data block per frequency (`index` addressable), columns
/// `ppd savings_percent`.
pub fn format_curves(grid: &SavingsGrid) -> String {
    let mut out = String::new();
    for (c, f) in grid.freqs.iter().enumerate() {
        if c > 0 {
            out.push_str("\n\n");
        }
        out.push_str(&format!("# freq_hz {f}\n# ppd savings_percent\n"));
        for (r, ppd) in grid.ppds.iter().enumerate() {
            out.push_str(&format!("{ppd} {}\n", sig6(100.0 * grid.savings[r][c])));
        }
    }
    out
}
