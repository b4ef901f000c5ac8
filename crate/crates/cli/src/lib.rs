//! Command-line front end for `fredpair`: JSON configs in, JSON reports out.

pub mod config;
pub mod run;
pub mod verify;

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use config::{ProblemConfig, Resolved};
use run::{curve_csv, execute, Status};

/// Bad arguments or a malformed config. Exit code 1.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Clone, Debug, Serialize)]
pub struct Timestamp {
    pub unix_ms: u128,
    pub elapsed_ms: f64,
}

/// Everything except `timestamp` is determined by the config.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: ProblemConfig,
    pub status: Status,
    pub exit_code: i32,
    pub result: serde_json::Value,
    pub timestamp: Timestamp,
}

pub struct Run {
    pub report: Report,
    pub curve_csv: Option<String>,
}

pub fn run(cfg: &Resolved) -> Result<Run, UsageError> {
    let start = Instant::now();
    let out = execute(cfg)?;
    let unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0);
    let report = Report {
        config: cfg.echo(),
        status: out.status,
        exit_code: out.status.exit_code(),
        result: out.result,
        timestamp: Timestamp { unix_ms, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 },
    };
    Ok(Run { report, curve_csv: out.curve.map(|c| curve_csv(&c)) })
}

/// Writes `report.json` (and `winding_curve.csv` when present) into `dir`.
pub fn write_outputs(dir: &Path, run: &Run) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(&run.report).expect("report serializes");
    std::fs::write(dir.join("report.json"), text + "\n")?;
    if let Some(csv) = &run.curve_csv {
        std::fs::write(dir.join("winding_curve.csv"), csv)?;
    }
    Ok(())
}
