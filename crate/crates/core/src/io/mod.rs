//! File formats and the command-line driver.
//!
//! - counts CSV: two data rows (`Y=1` then `Y=0`) of `r` nonnegative
//!   integer counts, an optional header row of `r` names, `#` comments.
//! - run config JSON: see [`RunConfig`].
//! - records CSV: one row per replication, columns [`RECORD_COLUMNS`].
//! - summary and manifest JSON: see [`SummaryReport`] and [`RunManifest`].
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_USAGE`], [`EXIT_DEGENERATE`],
//! [`EXIT_CHECK_FAILED`].

mod cli;
mod config;
mod counts;
mod report;

use thiserror::Error;

pub use cli::run;
pub use config::{ModelSpec, RunConfig, BOUND_G_GRID, DEFAULT_SEED};
pub use counts::{parse_counts, read_counts};
pub use report::{
    format_real, write_bounds_csv, write_records_csv, RunManifest, SummaryReport, BOUND_COLUMNS, RECORD_COLUMNS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Model(#[from] crate::Error),
}
