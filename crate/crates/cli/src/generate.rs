//! `dpm generate`: write a synthetic Gaussian-mixture dataset.

use std::path::PathBuf;

use clap::Args;

use dpm_core::baselines::generate_mixture;
use dpm_core::dataset::{write_dataset, write_meta, DatasetMeta};
use dpm_core::{Interval, Result};

use crate::common::parse_range;

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of mixture components.
    #[arg(long)]
    pub k: usize,
    /// Total number of points (rounded down to a multiple of k).
    #[arg(long)]
    pub n: usize,
    /// Dimensionality.
    #[arg(long)]
    pub d: usize,
    /// Per-component standard deviation.
    #[arg(long, default_value_t = 30.0)]
    pub sigma: f64,
    /// Minimum pairwise mean distance in units of sigma.
    #[arg(long, default_value_t = 10.0)]
    pub separation: f64,
    /// Public coordinate range as `lo,hi`.
    #[arg(long, value_parser = parse_range, default_value = "0,600")]
    pub range: Interval,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path; the `.meta.json` sidecar lands next to it.
    #[arg(short, long)]
    pub out: PathBuf,
}

pub fn run(args: &GenerateArgs) -> Result<()> {
    let (data, labels, means) = generate_mixture(
        args.k,
        args.n,
        args.d,
        args.separation,
        args.sigma,
        args.range,
        args.seed,
    )?;
    write_dataset(&args.out, &data, Some(&labels))?;
    write_meta(
        &args.out,
        &DatasetMeta {
            range: [args.range.lo, args.range.hi],
            d: args.d,
            true_means: Some(means),
        },
    )?;
    println!(
        "wrote {} points ({} clusters, d = {}) to {}",
        data.len(),
        args.k,
        args.d,
        args.out.display()
    );
    Ok(())
}
