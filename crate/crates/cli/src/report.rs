//! Check reports: a deterministic machine-readable record per check plus a
//! human table. Timing is shown in the table only, so the JSON stream is
//! byte-identical across runs with the same inputs and seed.

use serde::Serialize;
use std::io;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub check: String,
    pub digest: String,
    pub seed: u64,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip)]
    pub timing_ms: f64,
}

impl Report {
    pub fn new(
        check: impl Into<String>,
        digest: &str,
        seed: u64,
        samples: usize,
            max_residual: f64,
        tolerance: f64,
        pass: bool,
        timing_ms: f64,
    ) -> Report {
        Report {
            check: check.into(),
            digest: digest.to_string(),
            seed,
            samples,
            max_residual,
            tolerance,
            pass,
            timing_ms,
        }
    }
}

/// Canonical order: sorted by check name, regardless of completion order.
pub fn sort(mut reports: Vec<Report>) -> Vec<Report> {
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    reports
}

pub fn all_pass(reports: &[Report]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Newline-delimited JSON objects in canonical order.
pub fn to_json(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}

pub fn print_table(reports: &[Report], w: &mut impl io::Write) -> io::Result<()> {
    writeln!(
        w,
        "{:<34} {:>13} {:>10} {:>9} {:>7}",
        "check", "residual", "tolerance", "time[ms]", "result"
    )?;
    for r in reports {
        writeln!(
            w,
            "{:<34} {:>13.3e} {:>10.1e} {:>9.1} {:>7}",
            r.check,
            r.max_residual,
            r.tolerance,
            r.timing_ms,
            if r.pass { "pass" } else { "FAIL" }
        )?;
    }
    Ok(())
}
