//! Check records, suite reports and their serializations.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;

/// Direction of the comparison between residual and tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Pass when `residual ≤ tolerance`.
    Max,
    /// Pass when `residual ≥ tolerance`; used by non-degeneracy and witness checks.
    Min,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: &str, anchor: &str, residual: f64, tolerance: f64, bound: Bound) -> Self {
        let pass = match bound {
            Bound::Max => residual <= tolerance,
            Bound::Min => residual >= tolerance,
        };
        CheckRecord { name: name.to_string(), anchor: anchor.to_string(), residual, tolerance, bound, pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub model: String,
    pub seed: u64,
    pub points: usize,
    pub checks: Vec<CheckRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Process exit code: 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

/// Serializes a report. The JSON form leaves out the wall time so that it
/// is byte-identical across runs with the same inputs.
pub fn emit_report(r: &SuiteReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report is plain data");
            s.push('\n');
            s.into_bytes()
        }
        ReportFormat::Text => text(r).into_bytes(),
    }
}

fn text(r: &SuiteReport) -> String {
    let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "suite {} on {} (seed {}, {} points)", r.suite, r.model, r.seed, r.points);
    let _ = writeln!(out, "{:<6} {:<width$} {:>12} {:>12}  anchor", "", "check", "residual", "tolerance");
    for c in &r.checks {
        let flag = if c.pass { "ok" } else { "FAIL" };
        let cmp = match c.bound {
            Bound::Max => "<=",
            Bound::Min => ">=",
        };
        let _ = writeln!(
            out,
            "{flag:<6} {:<width$} {:>12.3e} {cmp}{:>10.1e}  {}",
            c.name, c.residual, c.tolerance, c.anchor
        );
    }
    let failed = r.failures().count();
    let _ = writeln!(
        out,
        "{} of {} checks passed in {:.2} s{}",
        r.checks.len() - failed,
        r.checks.len(),
        r.wall_time.as_secs_f64(),
        if failed > 0 { " -- FAILED" } else { "" }
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(residual: f64) -> SuiteReport {
        SuiteReport {
            suite: "demo".into(),
            model: "flat".into(),
            seed: 1,
            points: 3,
            checks: vec![
                CheckRecord::new("a", "x", 1e-12, 1e-8, Bound::Max),
                CheckRecord::new("b", "y", residual, 1e-8, Bound::Max),
            ],
            wall_time: Duration::from_millis(12),
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(report(0.0).exit_code(), 0);
        let bad = report(1.0);
        assert_eq!(bad.exit_code(), 1);
        let text = String::from_utf8(emit_report(&bad, ReportFormat::Text)).unwrap();
        assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains(" b ")));
    }

    #[test]
    fn json_ignores_wall_time() {
        let mut a = report(0.0);
        let b = a.clone();
        a.wall_time = Duration::from_secs(9);
        assert_eq!(emit_report(&a, ReportFormat::Json), emit_report(&b, ReportFormat::Json));
    }

    #[test]
    fn nan_fails_both_bounds() {
        assert!(!CheckRecord::new("n", "", f64::NAN, 1.0, Bound::Max).pass);
        assert!(!CheckRecord::new("n", "", f64::NAN, 1.0, Bound::Min).pass);
    }
}
