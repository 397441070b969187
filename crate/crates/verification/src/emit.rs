//! Writing reports to disk: a CSV of raw measurements, a structured-text
//! summary and a plot-data file per report, with deterministic bytes.

use std::fs;
use std::path::{Path, PathBuf};

use besovlab::error::Result;

use crate::experiment::ExperimentReport;
use crate::report::CheckReport;

/// Anything that can be written out as a report triple.
pub trait Report {
    fn id(&self) -> &str;
    fn csv(&self) -> String;
    fn summary(&self) -> String;
    fn plot_data(&self) -> String;
}

impl Report for CheckReport {
    fn id(&self) -> &str {
        &self.check_id
    }
    fn csv(&self) -> String {
        CheckReport::csv(self)
    }
    fn summary(&self) -> String {
        CheckReport::summary(self)
    }
    fn plot_data(&self) -> String {
        CheckReport::plot_data(self)
    }
}

impl Report for ExperimentReport {
    fn id(&self) -> &str {
        &self.check_id
    }
    fn csv(&self) -> String {
        ExperimentReport::csv(self)
    }
    fn summary(&self) -> String {
        ExperimentReport::summary(self)
    }
    fn plot_data(&self) -> String {
        ExperimentReport::plot_data(self)
    }
}

/// Write `<id>.csv`, `<id>.summary.txt` and `<id>.plot.csv` under `dir`,
/// creating the directory if needed. Returns the paths written.
pub fn emit_report(dir: &Path, report: &dyn Report) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let base = report.id().replace([' ', '/'], "-");
    let files = [
        (format!("{base}.csv"), report.csv()),
        (format!("{base}.summary.txt"), report.summary()),
        (format!("{base}.plot.csv"), report.plot_data()),
    ];
    let mut written = Vec::new();
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content)?;
        written.push(path);
    }
    Ok(written)
}
