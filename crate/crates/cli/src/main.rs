//! Batch front end for differentially private clustering experiments:
//! data generation, fitting, evaluation, sweeps and bound tables, all with
//! reproducible seeds.

mod analyze;
mod common;
mod config;
mod evaluate;
mod fit;
mod generate;
mod sweep;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "dpm", version, about = "Differentially private clustering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic Gaussian-mixture dataset (CSV + sidecar).
    Generate(generate::GenerateArgs),
    /// Cluster a dataset and write the result document.
    Fit(fit::FitArgs),
    /// Compute metrics for result documents against a dataset.
    Evaluate(evaluate::EvaluateArgs),
    /// Run a configuration grid and collect one CSV row per run.
    Sweep(sweep::SweepArgs),
    /// Print budget schedules and utility bounds for a configuration.
    Analyze(analyze::AnalyzeArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Fit(args) => fit::run(args),
        Command::Evaluate(args) => evaluate::run(args),
        Command::Sweep(args) => sweep::run(args),
        Command::Analyze(args) => analyze::run(args),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(common::exit_code(&err));
    }
}
