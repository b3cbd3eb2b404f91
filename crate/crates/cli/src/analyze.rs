//! `dpm analyze`: print the per-level budget schedule and the computable
//! utility bounds for a configuration, without touching any data.

use clap::Args;

use dpm_core::analysis::{central_emptiness_deficit, em_utility_bound, noisy_count_tail};
use dpm_core::budget::compose_privacy;
use dpm_core::calibration::minimal_emptiness;
use dpm_core::{Result};

use crate::config::FitConfig;

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Expected dataset size the bounds are evaluated at.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Total delta (default `1/(n*sqrt(n))`).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub eps_split: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub delta_split: Option<Vec<f64>>,
    #[arg(long, default_value_t = 7)]
    pub tau_r: usize,
    #[arg(long, default_value_t = 0.3)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0 / 12.0)]
    pub q: f64,
    #[arg(long, default_value_t = 5.0)]
    pub alpha: f64,
    /// Number of split candidates the selection chooses from.
    #[arg(long, default_value_t = 400)]
    pub candidates: usize,
    /// Assumed number of near-optimal candidates.
    #[arg(long, default_value_t = 5)]
    pub near_optimal: usize,
    /// Worst-case fill share of one split interval at the root (the
    /// single-Gaussian estimate is 1 - 0.80258).
    #[arg(long, default_value_t = 0.19742)]
    pub base_fill: f64,
}

pub fn run(args: &AnalyzeArgs) -> Result<()> {
    let mut cfg = FitConfig { eps: args.eps, tau_r: args.tau_r, ..Default::default() };
    if let Some(v) = &args.eps_split {
        cfg.eps_split = [v[0], v[1], v[2], v[3]];
    }
    if let Some(v) = &args.delta_split {
        cfg.delta_split = [v[0], v[1]];
    }
    cfg.delta = args.delta;
    cfg.validate()?;
    let delta = cfg.resolved_delta(args.n)?;
    let budget = cfg.budget(delta)?;
    let report = compose_privacy(&budget, args.tau_r)?;

    println!(
        "composed guarantee: eps = {:.6}, delta = {:.3e} (tau_r = {})",
        report.eps_total, report.delta_total, args.tau_r
    );
    println!(
        "budget: int {:.4} | cnt {:.4} | exp {:.4} | avg {:.4}",
        budget.eps_int, budget.eps_cnt, budget.eps_exp, budget.eps_avg
    );
    println!(
        "scoring: t = {}, q = {:.6}, alpha = {}, |W| = {}, |W_opt| = {}",
        args.t, args.q, args.alpha, args.candidates, args.near_optimal
    );
    println!();
    println!(
        "{:>5} {:>12} {:>12} {:>12} {:>10} {:>12} {:>14} {:>10}",
        "level", "eps_cnt", "lambda", "eps_exp", "n_est", "delta_f", "empt_deficit", "min_empt"
    );
    for level in 0..=args.tau_r {
        let n_est = args.n as f64 / (level as f64).exp2();
        let lambda = report.per_level_lambda[level];
        let sens = (args.t / args.q + args.alpha) / (n_est - lambda).max(1.0);
        let (eps_exp, deficit) = if level < args.tau_r {
            let eps = report.per_level_eps_exp[level];
            // the deficit bound is vacuous once the offset eats the count
            let deficit = if n_est > lambda {
                let d = central_emptiness_deficit(
                    args.t,
                    args.t,
                    args.q,
                    args.alpha,
                    n_est,
                    lambda,
                    eps,
                    args.candidates,
                    args.near_optimal,
                    2.0,
                    0.0,
                );
                format!("{d:>14.4}")
            } else {
                format!("{:>14}", "vacuous")
            };
            (format!("{eps:>12.6}"), deficit)
        } else {
            (format!("{:>12}", "-"), format!("{:>14}", "-"))
        };
        println!(
            "{:>5} {:>12.6} {:>12.2} {} {:>10.1} {:>12.6} {} {:>10.4}",
            level,
            report.per_level_eps_cnt[level],
            lambda,
            eps_exp,
            n_est,
            sens,
            deficit,
            minimal_emptiness(level as u32, args.base_fill),
        );
    }

    println!();
    println!("noisy-count tail bounds at level 0 (kappa in multiples of 1/eps_cnt_0):");
    let eps0 = report.per_level_eps_cnt[0];
    let delta_level = budget.delta_cnt / (args.tau_r + 1) as f64;
    for mult in [5.0, 10.0, 20.0, 40.0] {
        let kappa = mult / eps0;
        println!(
            "  P[|count error| > {:>10.1}] <= {:.3e}",
            kappa,
            noisy_count_tail(kappa, eps0, delta_level)
        );
    }
    println!();
    let exp0 = report.per_level_eps_exp[0];
    let sens0 =
        (args.t / args.q + args.alpha) / (args.n as f64 - report.per_level_lambda[0]).max(1.0);
    for kappa in [1.0, 2.0, 3.0] {
        println!(
            "selection deficit bound (level 0, kappa = {kappa}): {:.4}, miss prob <= {:.3}",
            em_utility_bound(args.candidates, args.near_optimal, 0.0, kappa, sens0, exp0),
            (-kappa).exp()
        );
    }
    Ok(())
}
