//! Helpers shared by the subcommands.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dpm_core::dataset::load_dataset;
use dpm_core::{Dataset, Error, Interval, Result};

/// Parse `"lo,hi"` into an interval (clap value parser).
pub fn parse_range(s: &str) -> std::result::Result<Interval, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected 'lo,hi', got '{s}'"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| format!("bad lower bound '{}'", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| format!("bad upper bound '{}'", parts[1]))?;
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

/// Decide which label column to use: an explicit request wins (`none`
/// disables detection), otherwise a header column literally named `label`
/// is picked up automatically.
pub fn detect_label_column(path: &Path, requested: Option<&str>) -> Result<Option<String>> {
    match requested {
        Some("none") => Ok(None),
        Some(name) => Ok(Some(name.to_string())),
        None => {
            let mut reader = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
            let mut records = reader.records();
            if let Some(first) = records.next().transpose()? {
                let is_header = first.iter().any(|f| f.trim().parse::<f64>().is_err());
                if is_header && first.iter().any(|f| f.trim() == "label") {
                    return Ok(Some("label".to_string()));
                }
            }
            Ok(None)
        }
    }
}

/// Load a dataset plus optional labels, resolving the label column first.
pub fn load_data(
    path: &Path,
    range: Option<Interval>,
    label_column: Option<&str>,
) -> Result<(Dataset, Option<Vec<i64>>)> {
    let column = detect_label_column(path, label_column)?;
    load_dataset(path, range, column.as_deref())
}

/// Short content hash of a JSON value, used to identify configurations in
/// metric rows.
pub fn config_hash(value: &serde_json::Value) -> String {
    let canonical = serde_json::to_vec(value).unwrap_or_default();
    let digest = Sha256::digest(&canonical);
    let mut out = String::with_capacity(16);
    for byte in digest.iter().take(8) {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// One line of the metrics CSV. Optional fields stay empty for invalid or
/// label-free runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsRow {
    pub run_id: String,
    pub seed: u64,
    pub config_hash: String,
    pub k: Option<usize>,
    pub inertia: Option<f64>,
    pub silhouette: Option<f64>,
    pub accuracy: Option<f64>,
    pub kd: Option<f64>,
    pub kd_norm: Option<f64>,
    pub eps_total: Option<f64>,
    pub delta_total: Option<f64>,
    pub wall_ms: Option<f64>,
}

pub const METRICS_HEADER: [&str; 12] = [
    "run_id",
    "seed",
    "config_hash",
    "k",
    "inertia",
    "silhouette",
    "accuracy",
    "kd",
    "kd_norm",
    "eps_total",
    "delta_total",
    "wall_ms",
];

fn field<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_metrics_csv(path: &Path, rows: &[MetricsRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(METRICS_HEADER)?;
    for row in rows {
        w.write_record([
            row.run_id.clone(),
            row.seed.to_string(),
            row.config_hash.clone(),
            field(&row.k),
            field(&row.inertia),
            field(&row.silhouette),
            field(&row.accuracy),
            field(&row.kd),
            field(&row.kd_norm),
            field(&row.eps_total),
            field(&row.delta_total),
            field(&row.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reference centre-sets cached as JSON.
pub fn read_references(path: &Path) -> Result<Vec<Vec<Vec<f64>>>> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_references(path: &Path, refs: &[Vec<Vec<f64>>]) -> Result<()> {
    let mut text = serde_json::to_string_pretty(refs)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// `path` with `suffix` appended to its file name.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    name.push_str(suffix);
    path.with_file_name(name)
}

/// Map library errors onto process exit codes: 1 for data problems, 2 for
/// configuration and usage problems.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Validation(_) | Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
        Error::Config(_) | Error::Domain(_) => 2,
    }
}
