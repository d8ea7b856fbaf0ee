use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ExperimentResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::param(format!("unknown format `{other}`"))),
        }
    }
}

pub const RECORD_COLUMNS: [&str; 11] = [
    "algorithm", "n", "graph_desc", "seed", "t_con", "timeout", "nontrivial", "trivial", "noop", "j0", "v0",
];

/// Fixed 12-significant-digit float text.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.11e}")
}

/// Writes `result` to `path`. CSV puts one record per row in `path` and the
/// summary and bound checks in a sibling `<stem>_summary.csv`; JSON holds all
/// of it in one file. Returns the files written.
pub fn emit(result: &ExperimentResult, format: Format, path: &Path) -> Result<Vec<PathBuf>> {
    for r in &result.records {
        super::recheck_record(r)?;
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    match format {
        Format::Json => {
            fs::write(path, serde_json::to_string_pretty(result)? + "\n")?;
            Ok(vec![path.to_path_buf()])
        }
        Format::Csv => {
            fs::write(path, records_csv(result)?)?;
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("results");
            let summary = path.with_file_name(format!("{stem}_summary.csv"));
            fs::write(&summary, summary_csv(result)?)?;
            Ok(vec![path.to_path_buf(), summary])
        }
    }
}

pub fn records_csv(result: &ExperimentResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RECORD_COLUMNS)?;
    for r in &result.records {
        w.write_record([
            r.algorithm.to_string(),
            r.n.to_string(),
            r.graph_desc.clone(),
            r.seed.to_string(),
            r.t_con.map(|t| t.to_string()).unwrap_or_default(),
            r.timeout.to_string(),
            r.nontrivial.to_string(),
            r.trivial.to_string(),
            r.noop.to_string(),
            r.j0.to_string(),
            r.v0.to_string(),
        ])?;
    }
    into_string(w)
}

pub fn summary_csv(result: &ExperimentResult) -> Result<String> {
    let s = &result.summary;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value", "measured", "holds", "source"])?;
    let mut row = |k: &str, v: String| w.write_record([k, &v, "", "", ""]);
    row("count", s.count.to_string())?;
    row("mean", fmt_float(s.mean))?;
    row("variance", fmt_float(s.variance))?;
    row("se", fmt_float(s.se))?;
    let (lo, hi) = s.ci95.map(|(a, b)| (fmt_float(a), fmt_float(b))).unwrap_or_default();
    row("ci95_lo", lo)?;
    row("ci95_hi", hi)?;
    row("min", fmt_float(s.min))?;
    row("max", fmt_float(s.max))?;
    row("timeouts", s.timeouts.to_string())?;
    row("nontrivial", s.nontrivial.to_string())?;
    row("trivial", s.trivial.to_string())?;
    row("noop", s.noop.to_string())?;
    for b in &result.bounds {
        w.write_record([
            format!("bound:{}", b.report.name),
            fmt_float(b.report.value),
            fmt_float(b.measured),
            b.holds.to_string(),
            b.report.source.clone(),
        ])?;
    }
    into_string(w)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json(path: &Path) -> Result<ExperimentResult> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
