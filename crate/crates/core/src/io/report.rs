use std::io::Write;

use serde::Serialize;

use super::config::RunConfig;
use crate::asymptotics::VarianceResult;
use crate::bounds::BoundRow;
use crate::montecarlo::{CheckOutcome, ReplicationRecord, SummaryStats};

pub const RECORD_COLUMNS: [&str; 10] =
    ["rep_index", "n", "estimate", "eta", "scaled_eta", "sigma2_hat", "ci_lo", "ci_hi", "covered", "degenerate"];

pub const BOUND_COLUMNS: [&str; 9] =
    ["bound", "n", "g", "value", "informative", "empirical_frequency", "empirical_stderr", "replications", "valid"];

/// Scientific notation with 17 significant digits; independent of locale.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

pub fn write_records_csv<W: Write>(records: &[ReplicationRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_COLUMNS)?;
    for r in records {
        w.write_record([
            r.rep_index.to_string(),
            r.n.to_string(),
            opt_real(r.estimate),
            opt_real(r.eta),
            opt_real(r.scaled_eta),
            opt_real(r.sigma2_hat),
            opt_real(r.ci_lo),
            opt_real(r.ci_hi),
            opt_bool(r.covered),
            r.is_degenerate().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bounds_csv<W: Write>(rows: &[BoundRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BOUND_COLUMNS)?;
    for row in rows {
        w.write_record([
            row.kind.name().to_string(),
            row.n.to_string(),
            format_real(row.g),
            format_real(row.bound.value),
            row.bound.informative.to_string(),
            opt_real(row.empirical.map(|e| e.frequency)),
            opt_real(row.empirical.map(|e| e.stderr)),
            row.empirical.map(|e| e.replications.to_string()).unwrap_or_default(),
            opt_bool(row.is_valid()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub true_divergence: f64,
    pub sigma2: VarianceResult,
    pub per_n: Vec<SummaryStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundRow>>,
    pub checks: Vec<CheckOutcome>,
}

/// Contents of `manifest.json`: everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub master_seed: u64,
    pub started_at: String,
    pub finished_at: String,
    pub checks: Vec<CheckOutcome>,
    pub all_passed: bool,
}
