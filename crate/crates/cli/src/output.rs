//! Report files: JSON lines, the summary CSV, the manifest and plain CSV tables.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ocwt::report::Status;

use crate::runner::RunManifest;
use crate::RunError;

pub const REPORTS_FILE: &str = "reports.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

fn output_error(path: &Path, e: impl std::fmt::Display) -> RunError {
    RunError::Output {
        path: path.to_owned(),
        message: e.to_string(),
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, RunError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
    }
    Ok(BufWriter::new(fs::File::create(path).map_err(|e| output_error(path, e))?))
}

/// Fixed-format number so the CSV does not depend on float printing details.
fn number(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.12e}")
    }
}

/// Writes the three run files into `dir` and returns their paths.
pub fn write_run(dir: &Path, manifest: &RunManifest) -> Result<Vec<PathBuf>, RunError> {
    let reports = dir.join(REPORTS_FILE);
    let mut w = create(&reports)?;
    for c in &manifest.checks {
        let line = serde_json::to_string(c).map_err(|e| output_error(&reports, e))?;
        writeln!(w, "{line}").map_err(|e| output_error(&reports, e))?;
    }
    w.flush().map_err(|e| output_error(&reports, e))?;

    let summary = dir.join(SUMMARY_FILE);
    write_summary(&summary, manifest)?;

    let path = dir.join(MANIFEST_FILE);
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, manifest).map_err(|e| output_error(&path, e))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| output_error(&path, e))?;
    Ok(vec![reports, summary, path])
}

/// `name, lhs, rhs, margin, pass`, one row per check; `pass` is `skipped`
/// when the check's hypothesis did not hold.
pub fn write_summary(path: &Path, manifest: &RunManifest) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let err = |e: csv::Error| output_error(path, e);
    w.write_record(["name", "lhs", "rhs", "margin", "pass"]).map_err(err)?;
    for c in &manifest.checks {
        let r = &c.report;
        w.write_record([
            c.id.clone(),
            number(r.lhs),
            number(r.rhs),
            number(r.margin),
            match r.status {
                Status::Skipped => "skipped".to_owned(),
                _ => r.pass.to_string(),
            },
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| output_error(path, e))
}

/// A numeric table with a header row.
pub fn write_table<const N: usize>(path: &Path, header: [&str; N], rows: &[[f64; N]]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let err = |e: csv::Error| output_error(path, e);
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| number(x))).map_err(err)?;
    }
    w.flush().map_err(|e| output_error(path, e))
}

pub fn read_manifest(path: &Path) -> Result<RunManifest, RunError> {
    let text = fs::read_to_string(path).map_err(|e| {
        RunError::Config(crate::ConfigError::Io {
            path: path.to_owned(),
            message: e.to_string(),
        })
    })?;
    serde_json::from_str(&text).map_err(|e| {
        RunError::Config(crate::ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    })
}

/// Human-readable digest: counts, then one line per failed check.
pub fn render(manifest: &RunManifest) -> String {
    let s = &manifest.summary;
    let mut out = format!(
        "ocwt {} scenario {}\nsuites: {}\nchecks: {} passed, {} failed, {} skipped, {} total\n",
        manifest.version,
        manifest.scenario_hash,
        manifest.suites.join(", "),
        s.passed,
        s.failed,
        s.skipped,
        s.total
    );
    for c in manifest.checks.iter().filter(|c| c.report.status == Status::Fail) {
        let r = &c.report;
        out.push_str(&format!(
            "FAIL {} lhs={:.6e} rhs={:.6e} margin={:.3e}",
            c.id, r.lhs, r.rhs, r.margin
        ));
        if let Some(n) = &r.note {
            out.push_str(&format!(" ({n})"));
        }
        out.push('\n');
    }
    out
}
