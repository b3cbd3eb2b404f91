//! `dpm fit`: run the clustering on a dataset and write the result document.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;

use dpm_core::calibration::{build_sigma_table, SigmaTable};
use dpm_core::dpm::{fit, DpmParams};
use dpm_core::result::{write_result, ResultDocument};
use dpm_core::rng::RandomSource;
use dpm_core::{Dataset, Error, Interval, Result};

use crate::common::{load_data, parse_range};
use crate::config::{ConfigEcho, FitConfig};

/// Load the calibration table from the cache file or build and save it.
fn resolve_sigma_table(
    args: &FitArgs,
    cfg: &FitConfig,
    data: &Dataset,
) -> Result<Option<SigmaTable>> {
    let path = match &args.sigma_table {
        None => return Ok(None),
        Some(path) => path,
    };
    if path.exists() {
        let table: SigmaTable = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if table.entries.iter().any(|e| e.d != data.dim()) {
            return Err(Error::Config(format!(
                "sigma table {} was built for another dimensionality",
                path.display()
            )));
        }
        return Ok(Some(table));
    }
    let table = build_sigma_table(
        &cfg.sigmas,
        (data.len() as f64).max(2.0),
        data.dim(),
        &RandomSource::new(cfg.seed).child("calibration").child("table"),
    )?;
    let mut text = serde_json::to_string_pretty(&table)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(Some(table))
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Dataset CSV (range from its `.meta.json` sidecar unless --range).
    #[arg(long)]
    pub data: PathBuf,
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Budget fractions `int,cnt,exp,avg` (must sum to 1).
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub eps_split: Option<Vec<f64>>,
    /// Delta fractions `cnt,avg` (must sum to 1).
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub delta_split: Option<Vec<f64>>,
    #[arg(long)]
    pub tau_r: Option<usize>,
    #[arg(long)]
    pub tau_e: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Sigma candidates for the interval-size calibration.
    #[arg(long, value_delimiter = ',')]
    pub sigmas: Option<Vec<f64>>,
    /// Fixed split interval size; skips calibration.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Calibration table cache: loaded when the file exists, otherwise
    /// built from the sigma candidates and saved there.
    #[arg(long)]
    pub sigma_table: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the public range as `lo,hi` instead of the sidecar.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Interval>,
    /// Label column to split off (`none` disables auto-detection).
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(short, long, default_value = "result.json")]
    pub out: PathBuf,
}

impl FitArgs {
    pub fn resolve_config(&self) -> Result<FitConfig> {
        let mut cfg = match &self.config {
            Some(path) => FitConfig::from_file(path)?,
            None => FitConfig::default(),
        };
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = Some(v);
        }
        if let Some(v) = &self.eps_split {
            cfg.eps_split = [v[0], v[1], v[2], v[3]];
        }
        if let Some(v) = &self.delta_split {
            cfg.delta_split = [v[0], v[1]];
        }
        if let Some(v) = self.tau_r {
            cfg.tau_r = v;
        }
        if let Some(v) = self.tau_e {
            cfg.tau_e = Some(v);
        }
        if let Some(v) = self.t {
            cfg.t = v;
        }
        if let Some(v) = self.q {
            cfg.q = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = &self.sigmas {
            cfg.sigmas = v.clone();
        }
        if let Some(v) = self.beta {
            cfg.beta = Some(v);
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(args: &FitArgs) -> Result<()> {
    let cfg = args.resolve_config()?;
    let (data, _labels) = load_data(&args.data, args.range, args.label_column.as_deref())?;

    let delta = cfg.resolved_delta(data.len())?;
    let sigma_table = resolve_sigma_table(args, &cfg, &data)?;
    let params = DpmParams {
        tau_r: cfg.tau_r,
        tau_e: cfg.tau_e,
        t: cfg.t,
        q: cfg.q,
        alpha: cfg.alpha,
        beta: cfg.beta,
        budget: cfg.budget(delta)?,
        sigmas: cfg.sigmas.clone(),
        sigma_table,
        seed: cfg.seed,
    };

    let start = Instant::now();
    let result = fit(&data, &params)?;
    let elapsed = start.elapsed();

    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    let echo = ConfigEcho {
        data: args.data.display().to_string(),
        config: cfg.clone(),
        resolved_delta: delta,
        resolved_beta: result.beta,
        resolved_tau_e: result.tau_e,
    };
    let doc = ResultDocument {
        centres: result.centres.clone(),
        weights: result.weights.clone(),
        split_tree: result.split_tree.clone(),
        privacy_report: result.report.clone(),
        seed: cfg.seed,
        config_echo: serde_json::to_value(&echo)?,
        warnings: result.warnings.clone(),
    };
    write_result(&args.out, &doc)?;
    println!(
        "k = {} clusters in {:.0} ms (eps_total = {:.6}, delta_total = {:.3e}) -> {}",
        result.k(),
        elapsed.as_secs_f64() * 1e3,
        result.report.eps_total,
        result.report.delta_total,
        args.out.display()
    );
    Ok(())
}
