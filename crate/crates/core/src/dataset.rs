//! Datasets: an n×d point set with a declared public coordinate range.
//!
//! The range is mandatory public metadata and is never inferred from the
//! data. On disk a dataset is a CSV (one row per point, d float columns,
//! optional label column) plus a `.meta.json` sidecar holding the range.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]`, the public per-coordinate range of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::config(format!(
                "range must be a finite interval with lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// An immutable n×d real point set with its public range.
///
/// Points are stored row-major; every coordinate is validated against the
/// range at construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    data: Vec<f64>,
    n: usize,
    d: usize,
    range: Interval,
}

impl Dataset {
    /// Build a dataset from row vectors, validating dimensionality and range.
    pub fn from_points(points: Vec<Vec<f64>>, range: Interval) -> Result<Self> {
        let n = points.len();
        let d = points.first().map(|p| p.len()).unwrap_or(0);
        if n > 0 && d == 0 {
            return Err(Error::validation("points must have at least one dimension"));
        }
        let mut data = Vec::with_capacity(n * d);
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::validation(format!(
                    "point {i} has {} coordinates, expected {d}",
                    p.len()
                )));
            }
            for (j, &x) in p.iter().enumerate() {
                validate_coord(x, i, j, &range)?;
                data.push(x);
            }
        }
        Ok(Dataset { data, n, d, range })
    }

    /// An empty dataset of known dimensionality.
    pub fn empty(d: usize, range: Interval) -> Result<Self> {
        if d == 0 {
            return Err(Error::validation("dimensionality must be at least 1"));
        }
        Ok(Dataset { data: Vec::new(), n: 0, d, range })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn range(&self) -> Interval {
        self.range
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn coord(&self, i: usize, dim: usize) -> f64 {
        self.data[i * self.d + dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d.max(1))
    }
}

fn validate_coord(x: f64, row: usize, col: usize, range: &Interval) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::validation(format!(
            "coordinate ({row}, {col}) is not finite"
        )));
    }
    if !range.contains(x) {
        return Err(Error::validation(format!(
            "coordinate ({row}, {col}) = {x} outside declared range [{}, {}]",
            range.lo, range.hi
        )));
    }
    Ok(())
}

/// Sidecar metadata stored next to a dataset CSV (`<basename>.meta.json`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub range: [f64; 2],
    pub d: usize,
    /// True mixture means, present for generated data so test harnesses can
    /// compare against the ground truth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_means: Option<Vec<Vec<f64>>>,
}

/// Path of the metadata sidecar for a dataset file.
pub fn sidecar_path(data_path: &Path) -> PathBuf {
    let mut p = data_path.to_path_buf();
    let stem = p
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    p.set_file_name(format!("{stem}.meta.json"));
    p
}

pub fn read_meta(data_path: &Path) -> Result<DatasetMeta> {
    let path = sidecar_path(data_path);
    let text = fs::read_to_string(&path).map_err(|e| {
        Error::config(format!(
            "range metadata required: cannot read sidecar {}: {e}",
            path.display()
        ))
    })?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_meta(data_path: &Path, meta: &DatasetMeta) -> Result<()> {
    let mut text = serde_json::to_string_pretty(meta)?;
    text.push('\n');
    fs::write(sidecar_path(data_path), text)?;
    Ok(())
}

/// Load a dataset from CSV, with the range taken from `range` or, when
/// omitted, from the metadata sidecar. The range is never inferred from the
/// data itself.
///
/// A header row is detected by attempting to parse the first record as
/// floats. `label_column` selects a column (by header name) that is split
/// off and returned separately instead of being treated as a coordinate.
pub fn load_dataset(
    path: &Path,
    range: Option<Interval>,
    label_column: Option<&str>,
) -> Result<(Dataset, Option<Vec<i64>>)> {
    let meta = match range {
        Some(_) => None,
        None => Some(read_meta(path)?),
    };
    let range = match range {
        Some(r) => r,
        None => {
            let m = meta.as_ref().unwrap();
            Interval::new(m.range[0], m.range[1])?
        }
    };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_path(path)?;

    let mut records = reader.records();
    let first = records.next().transpose()?;
    let (header, first_data): (Option<Vec<String>>, Option<csv::StringRecord>) = match first {
        None => (None, None),
        Some(rec) => {
            let numeric = rec.iter().all(|f| f.trim().parse::<f64>().is_ok());
            if numeric {
                (None, Some(rec))
            } else {
                (Some(rec.iter().map(|s| s.trim().to_string()).collect()), None)
            }
        }
    };

    let label_idx = match label_column {
        None => None,
        Some(name) => match &header {
            None => {
                return Err(Error::config(format!(
                    "label column '{name}' requested but the CSV has no header row"
                )))
            }
            Some(cols) => Some(cols.iter().position(|c| c == name).ok_or_else(|| {
                Error::config(format!("label column '{name}' not found in header"))
            })?),
        },
    };

    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<i64> = Vec::new();
    // 1-based line numbers for diagnostics; the header occupies line 1.
    let mut line = if header.is_some() { 1 } else { 0 };

    let mut handle = |rec: csv::StringRecord, line: usize| -> Result<()> {
        let mut row = Vec::with_capacity(rec.len());
        for (j, field) in rec.iter().enumerate() {
            if Some(j) == label_idx {
                let lbl = parse_label(field).ok_or_else(|| Error::Parse {
                    row: line,
                    reason: format!("label field '{field}' is not an integer"),
                })?;
                labels.push(lbl);
            } else {
                let x: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    row: line,
                    reason: format!("field {} ('{}') is not a number", j + 1, field),
                })?;
                row.push(x);
            }
        }
        points.push(row);
        Ok(())
    };

    if let Some(rec) = first_data {
        line += 1;
        handle(rec, line)?;
    }
    for rec in records {
        line += 1;
        handle(rec?, line)?;
    }

    let dataset = if points.is_empty() {
        let d = meta
            .as_ref()
            .map(|m| m.d)
            .ok_or_else(|| Error::config("empty CSV needs a sidecar declaring d"))?;
        Dataset::empty(d, range)?
    } else {
        Dataset::from_points(points, range)?
    };

    if let Some(m) = &meta {
        if m.d != dataset.dim() {
            return Err(Error::config(format!(
                "sidecar declares d = {} but the CSV has {} feature columns",
                m.d,
                dataset.dim()
            )));
        }
    }

    let labels = if label_idx.is_some() { Some(labels) } else { None };
    Ok((dataset, labels))
}

fn parse_label(field: &str) -> Option<i64> {
    let field = field.trim();
    if let Ok(v) = field.parse::<i64>() {
        return Some(v);
    }
    // tolerate labels written as floats ("3.0")
    let x: f64 = field.parse().ok()?;
    if x.fract() == 0.0 && x.abs() < i64::MAX as f64 {
        Some(x as i64)
    } else {
        None
    }
}

/// Write a dataset (and optional labels) as CSV with an `x0..x{d-1}[,label]`
/// header. Output is byte-deterministic for identical inputs.
pub fn write_dataset(path: &Path, data: &Dataset, labels: Option<&[i64]>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != data.len() {
            return Err(Error::validation(format!(
                "label count {} does not match point count {}",
                l.len(),
                data.len()
            )));
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (0..data.dim()).map(|j| format!("x{j}")).collect();
    if labels.is_some() {
        header.push("label".to_string());
    }
    w.write_record(&header)?;
    for (i, p) in data.points().enumerate() {
        let mut rec: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
        if let Some(l) = labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn tmp_csv(content: &str) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        (dir, path)
    }

    #[test]
    fn loads_plain_csv_with_explicit_range() {
        let (_dir, path) = tmp_csv("0.1,0.2\n0.3,0.4\n0.5,0.6\n");
        let (ds, labels) = load_dataset(&path, Some(Interval::new(0.0, 1.0).unwrap()), None).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.dim(), 2);
        assert!(labels.is_none());
        assert_eq!(ds.coord(1, 1), 0.4);
    }

    #[test]
    fn rejects_out_of_range_coordinate() {
        let (_dir, path) = tmp_csv("0.1,0.2\n1.5,0.4\n");
        let err = load_dataset(&path, Some(Interval::new(0.0, 1.0).unwrap()), None).unwrap_err();
        match err {
            Error::Validation(msg) => assert!(msg.contains("1.5"), "{msg}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn splits_label_column() {
        let (_dir, path) = tmp_csv("x0,x1,y\n0.1,0.2,0\n0.3,0.4,1\n0.5,0.6,1\n");
        let (ds, labels) =
            load_dataset(&path, Some(Interval::new(0.0, 1.0).unwrap()), Some("y")).unwrap();
        assert_eq!(ds.dim(), 2);
        assert_eq!(labels.unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn malformed_row_reports_line() {
        let (_dir, path) = tmp_csv("x0,x1\n0.1,0.2\n0.3,oops\n");
        let err = load_dataset(&path, Some(Interval::new(0.0, 1.0).unwrap()), None).unwrap_err();
        match err {
            Error::Parse { row, .. } => assert_eq!(row, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_range_is_config_error() {
        let (_dir, path) = tmp_csv("0.1,0.2\n");
        let err = load_dataset(&path, None, None).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn range_from_sidecar() {
        let (_dir, path) = tmp_csv("0.1,0.2\n");
        write_meta(&path, &DatasetMeta { range: [0.0, 1.0], d: 2, true_means: None }).unwrap();
        let (ds, _) = load_dataset(&path, None, None).unwrap();
        assert_eq!(ds.range(), Interval::new(0.0, 1.0).unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let ds = Dataset::from_points(
            vec![vec![0.25, 0.5], vec![0.125, 1.0]],
            Interval::new(0.0, 1.0).unwrap(),
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_dataset(&path, &ds, Some(&[4, 7])).unwrap();
        let (back, labels) =
            load_dataset(&path, Some(Interval::new(0.0, 1.0).unwrap()), Some("label")).unwrap();
        assert_eq!(back, ds);
        assert_eq!(labels.unwrap(), vec![4, 7]);
    }
}
