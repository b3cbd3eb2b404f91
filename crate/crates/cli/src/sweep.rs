//! `dpm sweep`: run a grid of configurations times seeds, one metrics CSV
//! row per run, resumable through a journal file.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dpm_core::dpm::{fit, DpmParams};
use dpm_core::scoring::validate_tq;
use dpm_core::{Error, Interval, Result};

use crate::common::{config_hash, load_data, parse_range, with_suffix, write_metrics_csv, MetricsRow};
use crate::config::FitConfig;
use crate::evaluate::{evaluate_one, resolve_references};

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// TOML grid file.
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Interval>,
    #[arg(long)]
    pub label_column: Option<String>,
    /// Long-form CSV output; `<out>.journal.jsonl` tracks completed cells.
    #[arg(short, long)]
    pub out: PathBuf,
}

/// The sweep grid: the cross product of `eps_splits` x `t` x `q` x `seeds`,
/// with everything else fixed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub eps: f64,
    pub delta: Option<f64>,
    pub delta_split: [f64; 2],
    pub tau_r: usize,
    pub tau_e: Option<f64>,
    pub alpha: f64,
    pub sigmas: Vec<f64>,
    pub beta: Option<f64>,
    pub eps_splits: Vec<[f64; 4]>,
    pub t: Vec<f64>,
    pub q: Vec<f64>,
    pub seeds: Vec<u64>,
    pub k_candidates: Vec<usize>,
    pub runs_per_k: usize,
    pub top_l: usize,
    pub silhouette_cap: usize,
    pub eval_seed: u64,
}

impl Default for SweepGrid {
    fn default() -> Self {
        let base = FitConfig::default();
        SweepGrid {
            eps: base.eps,
            delta: None,
            delta_split: base.delta_split,
            tau_r: base.tau_r,
            tau_e: None,
            alpha: base.alpha,
            sigmas: base.sigmas,
            beta: None,
            eps_splits: vec![base.eps_split],
            t: vec![base.t],
            q: vec![base.q],
            seeds: vec![0],
            k_candidates: (2..=12).collect(),
            runs_per_k: 3,
            top_l: 20,
            silhouette_cap: 5000,
            eval_seed: 1,
        }
    }
}

struct Cell {
    run_id: String,
    config: FitConfig,
}

fn expand(grid: &SweepGrid) -> Result<Vec<Cell>> {
    if grid.eps_splits.is_empty() || grid.t.is_empty() || grid.q.is_empty() || grid.seeds.is_empty()
    {
        return Err(Error::Config("sweep grid has an empty axis".into()));
    }
    let mut cells = Vec::new();
    let mut grid_index = 0usize;
    for split in &grid.eps_splits {
        for &t in &grid.t {
            for &q in &grid.q {
                for &seed in &grid.seeds {
                    cells.push(Cell {
                        run_id: format!("g{grid_index:04}_s{seed}"),
                        config: FitConfig {
                            eps: grid.eps,
                            delta: grid.delta,
                            eps_split: *split,
                            delta_split: grid.delta_split,
                            tau_r: grid.tau_r,
                            tau_e: grid.tau_e,
                            t,
                            q,
                            alpha: grid.alpha,
                            sigmas: grid.sigmas.clone(),
                            beta: grid.beta,
                            seed,
                        },
                    });
                }
                grid_index += 1;
            }
        }
    }
    Ok(cells)
}

#[derive(Serialize, Deserialize)]
struct JournalLine {
    run_id: String,
    row: MetricsRow,
}

pub fn run(args: &SweepArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.grid)?;
    let grid: SweepGrid =
        toml::from_str(&text).map_err(|e| Error::Config(format!("bad grid file: {e}")))?;
    let cells = expand(&grid)?;

    let (data, labels) = load_data(&args.data, args.range, args.label_column.as_deref())?;

    // completed rows from an interrupted run are reused as-is
    let journal_path = with_suffix(&args.out, ".journal.jsonl");
    let mut done: Vec<JournalLine> = Vec::new();
    if journal_path.exists() {
        for line in BufReader::new(std::fs::File::open(&journal_path)?).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            done.push(serde_json::from_str(&line)?);
        }
        eprintln!("resuming: {} of {} cells already journaled", done.len(), cells.len());
    }

    let refs_path = with_suffix(&args.out, ".refs.json");
    let refs = resolve_references(
        &data,
        Some(&refs_path),
        Some(&grid.k_candidates),
        grid.runs_per_k,
        grid.top_l,
        grid.eval_seed,
        grid.silhouette_cap,
    )?;

    let journal = Mutex::new(
        OpenOptions::new().create(true).append(true).open(&journal_path)?,
    );
    let pending: Vec<&Cell> = cells
        .iter()
        .filter(|c| !done.iter().any(|d| d.run_id == c.run_id))
        .collect();

    let new_rows: Vec<JournalLine> = pending
        .par_iter()
        .map(|cell| -> Result<JournalLine> {
            let row = run_cell(cell, &data, labels.as_deref(), &refs, &grid)?;
            let line = JournalLine { run_id: cell.run_id.clone(), row };
            {
                let mut file = journal.lock().unwrap();
                let mut bytes = serde_json::to_vec(&line)?;
                bytes.push(b'\n');
                file.write_all(&bytes)?;
                file.flush()?;
            }
            Ok(line)
        })
        .collect::<Result<_>>()?;
    done.extend(new_rows);

    // emit in deterministic grid order regardless of completion order
    let mut rows = Vec::with_capacity(cells.len());
    for cell in &cells {
        match done.iter().find(|d| d.run_id == cell.run_id) {
            Some(line) => rows.push(line.row.clone()),
            None => {
                return Err(Error::Config(format!("cell {} produced no row", cell.run_id)))
            }
        }
    }
    write_metrics_csv(&args.out, &rows)?;
    println!("{} rows -> {}", rows.len(), args.out.display());
    Ok(())
}

fn run_cell(
    cell: &Cell,
    data: &dpm_core::Dataset,
    labels: Option<&[i64]>,
    refs: &[Vec<Vec<f64>>],
    grid: &SweepGrid,
) -> Result<MetricsRow> {
    let cfg = &cell.config;
    let hash = config_hash(&serde_json::to_value(cfg)?);
    let mut row = MetricsRow {
        run_id: cell.run_id.clone(),
        seed: cfg.seed,
        config_hash: hash,
        k: None,
        inertia: None,
        silhouette: None,
        accuracy: None,
        kd: None,
        kd_norm: None,
        eps_total: None,
        delta_total: None,
        wall_ms: None,
    };

    // invalid parameter combinations are reported, not fatal
    if cfg.validate().is_err() || validate_tq(cfg.t, cfg.q).is_err() {
        eprintln!("cell {}: invalid configuration, skipped", cell.run_id);
        return Ok(row);
    }

    let start = Instant::now();
    let delta = cfg.resolved_delta(data.len())?;
    let params = DpmParams {
        tau_r: cfg.tau_r,
        tau_e: cfg.tau_e,
        t: cfg.t,
        q: cfg.q,
        alpha: cfg.alpha,
        beta: cfg.beta,
        budget: cfg.budget(delta)?,
        sigmas: cfg.sigmas.clone(),
        sigma_table: None,
        seed: cfg.seed,
    };
    let result = fit(data, &params)?;
    let report = evaluate_one(
        data,
        labels,
        &result.centres,
        refs,
        grid.silhouette_cap,
        grid.eval_seed,
    )?;
    row.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    row.k = Some(report.k);
    row.inertia = Some(report.inertia);
    row.silhouette = Some(report.silhouette);
    row.accuracy = report.accuracy;
    row.kd = Some(report.kmeans_distance);
    row.kd_norm = Some(report.kmeans_distance_normalized);
    row.eps_total = Some(result.report.eps_total);
    row.delta_total = Some(result.report.delta_total);
    Ok(row)
}
