//! `dpm evaluate`: compute the metric report for one or more result
//! documents against a dataset and a KMeans reference.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde::Serialize;

use dpm_core::baselines::reference_runs;
use dpm_core::metrics::{
    accuracy, inertia, kmeans_distance, kmeans_distance_normalized, silhouette, MetricReport,
};
use dpm_core::result::read_result;
use dpm_core::{Dataset, Error, Interval, Result};

use crate::common::{
    config_hash, load_data, parse_range, read_references, write_metrics_csv, write_references,
    MetricsRow,
};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Result document(s) to evaluate; several files get a mean/std summary.
    #[arg(long, required = true, num_args = 1..)]
    pub result: Vec<PathBuf>,
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Interval>,
    /// Label column for clustering accuracy (`none` disables detection).
    #[arg(long)]
    pub label_column: Option<String>,
    /// Reference centre-set cache; loaded when present, else computed and
    /// saved here.
    #[arg(long)]
    pub references: Option<PathBuf>,
    /// Candidate cluster counts for the reference search.
    #[arg(long, value_delimiter = ',')]
    pub k_candidates: Option<Vec<usize>>,
    #[arg(long, default_value_t = 3)]
    pub runs_per_k: usize,
    /// Number of top-ranked KMeans runs kept as references.
    #[arg(long, default_value_t = 20)]
    pub top_l: usize,
    #[arg(long, default_value_t = 5000)]
    pub silhouette_cap: usize,
    #[arg(long, default_value_t = 1)]
    pub eval_seed: u64,
    /// Metrics CSV output.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Full metric reports as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Serialize)]
struct NamedReport<'a> {
    run_id: &'a str,
    report: &'a MetricReport,
}

pub fn resolve_references(
    data: &Dataset,
    cache: Option<&PathBuf>,
    k_candidates: Option<&Vec<usize>>,
    runs_per_k: usize,
    top_l: usize,
    seed: u64,
    silhouette_cap: usize,
) -> Result<Vec<Vec<Vec<f64>>>> {
    if let Some(path) = cache {
        if path.exists() {
            return read_references(path);
        }
    }
    let default_candidates: Vec<usize> = (2..=12).collect();
    let candidates = k_candidates.unwrap_or(&default_candidates);
    let refs = reference_runs(data, candidates, runs_per_k, top_l, seed, silhouette_cap)?;
    if let Some(path) = cache {
        write_references(path, &refs)?;
    }
    Ok(refs)
}

pub fn evaluate_one(
    data: &Dataset,
    labels: Option<&[i64]>,
    centres: &[Vec<f64>],
    refs: &[Vec<Vec<f64>>],
    silhouette_cap: usize,
    eval_seed: u64,
) -> Result<MetricReport> {
    let kd = kmeans_distance(refs, centres)?;
    Ok(MetricReport {
        k: centres.len(),
        inertia: inertia(data, centres)?,
        silhouette: silhouette(data, centres, silhouette_cap, eval_seed)?,
        accuracy: labels.map(|l| accuracy(data, l, centres)).transpose()?,
        kmeans_distance: kd,
        kmeans_distance_normalized: kmeans_distance_normalized(
            kd,
            centres.len(),
            data.range(),
            data.dim(),
        ),
        silhouette_cap,
    })
}

pub fn run(args: &EvaluateArgs) -> Result<()> {
    let (data, labels) = load_data(&args.data, args.range, args.label_column.as_deref())?;
    let refs = resolve_references(
        &data,
        args.references.as_ref(),
        args.k_candidates.as_ref(),
        args.runs_per_k,
        args.top_l,
        args.eval_seed,
        args.silhouette_cap,
    )?;

    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for path in &args.result {
        let doc = read_result(path)?;
        if doc.centres.is_empty() {
            return Err(Error::Config(format!("{} holds no centres", path.display())));
        }
        if doc.centres[0].len() != data.dim() {
            return Err(Error::Config(format!(
                "result {} has d = {} but the dataset has d = {}",
                path.display(),
                doc.centres[0].len(),
                data.dim()
            )));
        }
        let start = Instant::now();
        let report = evaluate_one(
            &data,
            labels.as_deref(),
            &doc.centres,
            &refs,
            args.silhouette_cap,
            args.eval_seed,
        )?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let run_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "result".into());
        rows.push(MetricsRow {
            run_id: run_id.clone(),
            seed: doc.seed,
            config_hash: config_hash(&doc.config_echo),
            k: Some(report.k),
            inertia: Some(report.inertia),
            silhouette: Some(report.silhouette),
            accuracy: report.accuracy,
            kd: Some(report.kmeans_distance),
            kd_norm: Some(report.kmeans_distance_normalized),
            eps_total: Some(doc.privacy_report.eps_total),
            delta_total: Some(doc.privacy_report.delta_total),
            wall_ms: Some(wall_ms),
        });
        reports.push((run_id, report));
    }

    if rows.len() > 1 {
        let (mean, std) = summary_rows(&rows);
        rows.push(mean);
        rows.push(std);
    }

    for row in &rows {
        println!(
            "{}: k={} inertia={} silhouette={} accuracy={} kd={} kd_norm={}",
            row.run_id,
            row.k.map(|v| v.to_string()).unwrap_or_default(),
            fmt(row.inertia),
            fmt(row.silhouette),
            fmt(row.accuracy),
            fmt(row.kd),
            fmt(row.kd_norm),
        );
    }

    if let Some(out) = &args.out {
        write_metrics_csv(out, &rows)?;
    }
    if let Some(json) = &args.json {
        let named: Vec<NamedReport> = reports
            .iter()
            .map(|(id, r)| NamedReport { run_id: id, report: r })
            .collect();
        let mut text = serde_json::to_string_pretty(&named)?;
        text.push('\n');
        std::fs::write(json, text)?;
    }
    Ok(())
}

fn fmt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into())
}

/// Mean and standard-deviation rows over the numeric columns.
fn summary_rows(rows: &[MetricsRow]) -> (MetricsRow, MetricsRow) {
    fn stats(values: Vec<f64>) -> Option<(f64, f64)> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some((mean, var.sqrt()))
    }
    let collect = |get: fn(&MetricsRow) -> Option<f64>| -> Option<(f64, f64)> {
        stats(rows.iter().filter_map(get).collect())
    };

    let inertia = collect(|r| r.inertia);
    let silhouette = collect(|r| r.silhouette);
    let accuracy = collect(|r| r.accuracy);
    let kd = collect(|r| r.kd);
    let kd_norm = collect(|r| r.kd_norm);
    let eps = collect(|r| r.eps_total);
    let delta = collect(|r| r.delta_total);
    let wall = collect(|r| r.wall_ms);

    // k stays empty in summary rows (its mean is rarely integral)
    let build = |name: &str, pick: fn(&Option<(f64, f64)>) -> Option<f64>| MetricsRow {
        run_id: name.to_string(),
        seed: 0,
        config_hash: String::new(),
        k: None,
        inertia: pick(&inertia),
        silhouette: pick(&silhouette),
        accuracy: pick(&accuracy),
        kd: pick(&kd),
        kd_norm: pick(&kd_norm),
        eps_total: pick(&eps),
        delta_total: pick(&delta),
        wall_ms: pick(&wall),
    };
    (build("mean", |s| s.map(|(m, _)| m)), build("std", |s| s.map(|(_, d)| d)))
}
