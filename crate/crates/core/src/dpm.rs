//! The recursive privacy-preserving separation engine.
//!
//! A run noisily counts the dataset, calibrates the split interval size,
//! then recursively selects splits with the Exponential Mechanism over the
//! emptiness/centreness score. A selected split is applied only when both
//! children keep a minimum noisy size; halting nodes become clusters and
//! receive privacy-preserving centres.

use crate::budget::{compose_privacy, PrivacyBudget, PrivacyReport};
use crate::calibration::{interval_size, interval_size_with_table, SigmaTable};
use crate::dataset::{Dataset, Interval};
use crate::error::{Error, Result};
use crate::mech::{dp_average, exponential_mechanism, noisy_count, NoisyCount};
use crate::rng::RandomSource;
use crate::scoring::{
    generate_candidates, num_splits, score, score_sensitivity, DimView, ScoreParams,
    SplitCandidate,
};
use crate::tree::{LeafInfo, SplitDecision, SplitTreeNode};

/// All knobs of one clustering run.
///
/// `tau_e` defaults to `n_tilde / 2^tau_r` of the root noisy count and
/// `beta` to the privately calibrated interval size.
#[derive(Debug, Clone, PartialEq)]
pub struct DpmParams {
    pub tau_r: usize,
    pub tau_e: Option<f64>,
    pub t: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub budget: PrivacyBudget,
    pub sigmas: Vec<f64>,
    /// Precomputed calibration table (e.g. from a cache file); when absent
    /// the table is rebuilt per run from the seeded source.
    pub sigma_table: Option<SigmaTable>,
    pub seed: u64,
}

impl DpmParams {
    /// Parameters with the standard defaults: depth 7, `t = 0.3`,
    /// `q = 1/12`, `alpha = 5`, sigma candidates `[30]`.
    pub fn new(budget: PrivacyBudget, seed: u64) -> Self {
        DpmParams {
            tau_r: 7,
            tau_e: None,
            t: 0.3,
            q: 1.0 / 12.0,
            alpha: 5.0,
            beta: None,
            budget,
            sigmas: vec![30.0],
            sigma_table: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.tau_r == 0 {
            return Err(Error::domain("tau_r must be at least 1"));
        }
        if let Some(tau_e) = self.tau_e {
            if !(tau_e >= 0.0 && tau_e.is_finite()) {
                return Err(Error::domain(format!("tau_e must be non-negative, got {tau_e}")));
            }
        }
        if let Some(beta) = self.beta {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(Error::domain(format!("beta must be positive, got {beta}")));
            }
        } else if self.sigmas.is_empty() && self.sigma_table.is_none() {
            return Err(Error::domain(
                "either beta, a sigma candidate list, or a sigma table is required",
            ));
        }
        self.budget.validate()
    }
}

/// Which DP primitive an entry of the [`BudgetLedger`] records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MechanismKind {
    Count,
    Exp,
    Avg,
    Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub kind: MechanismKind,
    pub level: usize,
    pub eps: f64,
    pub delta: f64,
}

/// Every DP call a run actually made, for auditing against the report.
///
/// Sibling calls of one kind at one level act on disjoint subsets and jointly
/// consume that level's budget once (parallel composition).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BudgetLedger {
    pub entries: Vec<LedgerEntry>,
}

impl BudgetLedger {
    fn record(&mut self, kind: MechanismKind, level: usize, eps: f64, delta: f64) {
        self.entries.push(LedgerEntry { kind, level, eps, delta });
    }

    /// Total epsilon under parallel composition: each distinct (kind, level)
    /// combination is charged once.
    pub fn effective_eps(&self) -> f64 {
        let mut seen: Vec<(MechanismKind, usize)> = Vec::new();
        let mut total = 0.0;
        for e in &self.entries {
            let key = (e.kind, e.level);
            if !seen.contains(&key) {
                seen.push(key);
                total += e.eps;
            }
        }
        total
    }
}

/// The output of [`fit`]: centres and weights in leaf order, the split tree,
/// the composed privacy report and the audit ledger.
#[derive(Debug, Clone)]
pub struct ClusteringResult {
    pub centres: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub split_tree: SplitTreeNode,
    pub report: PrivacyReport,
    /// Split interval size actually used (calibrated or overridden).
    pub beta: f64,
    /// Minimum noisy cluster size actually used.
    pub tau_e: f64,
    pub warnings: Vec<String>,
    pub ledger: BudgetLedger,
}

impl ClusteringResult {
    pub fn k(&self) -> usize {
        self.centres.len()
    }
}

/// Invert the dimension-major candidate enumeration: flat index ->
/// (dimension, position).
pub fn decode_split_index(
    flat_index: usize,
    d: usize,
    num_splits: usize,
    range: Interval,
    beta: f64,
) -> Result<(usize, f64)> {
    if num_splits == 0 || flat_index >= d * num_splits {
        return Err(Error::domain(format!(
            "flat index {flat_index} out of bounds for {d} x {num_splits} candidates"
        )));
    }
    let dimension = flat_index / num_splits;
    let offset = flat_index % num_splits;
    Ok((dimension, range.lo + (offset as f64 + 0.5) * beta))
}

/// Per-dimension views of a subset, each sorted by that dimension's
/// coordinate. Splitting preserves the orders, so a subset never re-sorts.
struct Subset {
    order: Vec<Vec<u32>>,
}

impl Subset {
    fn root(data: &Dataset) -> Self {
        let d = data.dim();
        let mut order = Vec::with_capacity(d);
        for dim in 0..d {
            let mut idx: Vec<u32> = (0..data.len() as u32).collect();
            idx.sort_by(|&a, &b| {
                data.coord(a as usize, dim)
                    .partial_cmp(&data.coord(b as usize, dim))
                    .unwrap()
            });
            order.push(idx);
        }
        Subset { order }
    }

    fn len(&self) -> usize {
        self.order.first().map(|o| o.len()).unwrap_or(0)
    }

    /// Split into `coord <= position` and the complement, keeping per-dim
    /// orders intact.
    fn partition(&self, data: &Dataset, dimension: usize, position: f64) -> (Subset, Subset) {
        let d = self.order.len();
        let mut left = Vec::with_capacity(d);
        let mut right = Vec::with_capacity(d);
        for dim in 0..d {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for &i in &self.order[dim] {
                if data.coord(i as usize, dimension) <= position {
                    l.push(i);
                } else {
                    r.push(i);
                }
            }
            left.push(l);
            right.push(r);
        }
        (Subset { order: left }, Subset { order: right })
    }
}

struct FitCtx<'a> {
    data: &'a Dataset,
    score_params: ScoreParams,
    candidates: Vec<SplitCandidate>,
    splits_per_dim: usize,
    eps_cnt: Vec<f64>,
    eps_exp: Vec<f64>,
    lambdas: Vec<f64>,
    tau_r: usize,
    tau_e: f64,
    src: RandomSource,
}

enum BuildNode {
    Internal { level: usize, decision: SplitDecision, children: Box<[BuildNode; 2]> },
    Leaf { level: usize, decision: Option<SplitDecision>, indices: Vec<u32>, n_tilde: f64, path: String },
}

/// Run the full clustering on a dataset.
pub fn fit(data: &Dataset, params: &DpmParams) -> Result<ClusteringResult> {
    params.validate()?;
    let mut report = compose_privacy(&params.budget, params.tau_r)?;
    let mut warnings = Vec::new();
    let mut ledger = BudgetLedger::default();
    let src = RandomSource::new(params.seed);

    let root_count = noisy_count(
        data.len(),
        report.per_level_eps_cnt[0],
        &mut src.child("dpm").child("count").rng(),
    )?
    .at_level(0);
    ledger.record(MechanismKind::Count, 0, root_count.eps_used, 0.0);

    // resolve beta: explicit override, privately calibrated, or absent for
    // degenerate inputs
    let beta = if let Some(beta) = params.beta {
        report.eps_total -= params.budget.eps_int; // calibration skipped
        Some(beta)
    } else if data.len() >= 2 {
        let calibration_src = src.child("calibration");
        let beta = match &params.sigma_table {
            Some(table) => {
                interval_size_with_table(data, table, params.budget.eps_int, &calibration_src)?
            }
            None => {
                let table_count = root_count.value.max(2.0);
                interval_size(
                    data,
                    table_count,
                    params.budget.eps_int,
                    &params.sigmas,
                    &calibration_src,
                )?
            }
        };
        ledger.record(MechanismKind::Interval, 0, params.budget.eps_int, 0.0);
        Some(beta)
    } else {
        report.eps_total -= params.budget.eps_int;
        None
    };

    let tau_e = params.tau_e.unwrap_or_else(|| {
        root_count.value.max(0.0) / (params.tau_r as f64).exp2()
    });

    let tree = match beta {
        Some(beta) if !data.is_empty() => {
            let score_params = ScoreParams::new(params.t, params.q, params.alpha, beta)?;
            let ctx = FitCtx {
                data,
                score_params,
                candidates: generate_candidates(data.range(), data.dim(), beta)?,
                splits_per_dim: num_splits(data.range(), beta)?,
                eps_cnt: report.per_level_eps_cnt.clone(),
                eps_exp: report.per_level_eps_exp.clone(),
                lambdas: report.per_level_lambda.clone(),
                tau_r: params.tau_r,
                tau_e,
                src: src.clone(),
            };
            build(&ctx, &mut ledger, Subset::root(data), &root_count, 0, "r".to_string())?
        }
        _ => {
            if data.is_empty() {
                warnings.push("empty dataset: emitting a single noise-only cluster".to_string());
            } else {
                warnings.push(format!(
                    "dataset of {} point(s) is too small to calibrate; emitting a single cluster",
                    data.len()
                ));
            }
            let indices: Vec<u32> = (0..data.len() as u32).collect();
            BuildNode::Leaf {
                level: 0,
                decision: None,
                indices,
                n_tilde: root_count.value,
                path: "r".to_string(),
            }
        }
    };

    // second pass: privacy-preserving centre per leaf, deterministic
    // left-to-right order
    let mut centres = Vec::new();
    let mut weights = Vec::new();
    let split_tree = finalize(
        data,
        &params.budget,
        &src,
        &mut ledger,
        tree,
        &mut centres,
        &mut weights,
    )?;

    Ok(ClusteringResult {
        centres,
        weights,
        split_tree,
        report,
        beta: beta.unwrap_or(0.0),
        tau_e,
        warnings,
        ledger,
    })
}

fn build(
    ctx: &FitCtx<'_>,
    ledger: &mut BudgetLedger,
    subset: Subset,
    n_tilde: &NoisyCount,
    level: usize,
    path: String,
) -> Result<BuildNode> {
    if level >= ctx.tau_r {
        return Ok(BuildNode::Leaf {
            level,
            decision: None,
            indices: subset.order.first().cloned().unwrap_or_default(),
            n_tilde: n_tilde.value,
            path,
        });
    }

    let node_src = ctx.src.child("dpm").child(format!("node/{path}"));
    let (left, right, mut decision) = select_split(ctx, ledger, &subset, n_tilde, level, &node_src)?;

    let eps_child = ctx.eps_cnt[level + 1];
    let n1 = noisy_count(left.len(), eps_child, &mut node_src.child("cnt0").rng())?
        .at_level(level + 1);
    let n2 = noisy_count(right.len(), eps_child, &mut node_src.child("cnt1").rng())?
        .at_level(level + 1);
    ledger.record(MechanismKind::Count, level + 1, eps_child, 0.0);
    ledger.record(MechanismKind::Count, level + 1, eps_child, 0.0);

    if n1.value < ctx.tau_e || n2.value < ctx.tau_e {
        // the selected split is not applied; the node becomes a cluster
        decision.applied = false;
        return Ok(BuildNode::Leaf {
            level,
            decision: Some(decision),
            indices: subset.order.first().cloned().unwrap_or_default(),
            n_tilde: n_tilde.value,
            path,
        });
    }

    let left_node = build(ctx, ledger, left, &n1, level + 1, format!("{path}0"))?;
    let right_node = build(ctx, ledger, right, &n2, level + 1, format!("{path}1"))?;
    Ok(BuildNode::Internal {
        level,
        decision,
        children: Box::new([left_node, right_node]),
    })
}

fn select_split(
    ctx: &FitCtx<'_>,
    ledger: &mut BudgetLedger,
    subset: &Subset,
    n_tilde: &NoisyCount,
    level: usize,
    node_src: &RandomSource,
) -> Result<(Subset, Subset, SplitDecision)> {
    let sensitivity = score_sensitivity(&ctx.score_params, n_tilde.value, ctx.lambdas[level]);
    let clamped = n_tilde.clamped();
    let scores: Vec<f64> = ctx
        .candidates
        .iter()
        .map(|cand| {
            let axis = DimView {
                data: ctx.data,
                indices: &subset.order[cand.dimension],
                dimension: cand.dimension,
            };
            score(&axis, cand, clamped, &ctx.score_params)
        })
        .collect::<Result<_>>()?;

    let eps = ctx.eps_exp[level];
    let chosen = exponential_mechanism(&scores, sensitivity, eps, &mut node_src.child("em").rng())?;
    ledger.record(MechanismKind::Exp, level, eps, 0.0);

    let (dimension, position) = decode_split_index(
        chosen,
        ctx.data.dim(),
        ctx.splits_per_dim,
        ctx.data.range(),
        ctx.score_params.beta,
    )?;
    debug_assert_eq!(dimension, ctx.candidates[chosen].dimension);
    debug_assert_eq!(position, ctx.candidates[chosen].position);

    let (left, right) = subset.partition(ctx.data, dimension, position);
    let decision = SplitDecision {
        dimension,
        position,
        level,
        applied: true,
        chosen_flat_index: chosen,
    };
    Ok((left, right, decision))
}

fn finalize(
    data: &Dataset,
    budget: &PrivacyBudget,
    src: &RandomSource,
    ledger: &mut BudgetLedger,
    node: BuildNode,
    centres: &mut Vec<Vec<f64>>,
    weights: &mut Vec<f64>,
) -> Result<SplitTreeNode> {
    match node {
        BuildNode::Internal { level, decision, children } => {
            let [l, r] = *children;
            let left = finalize(data, budget, src, ledger, l, centres, weights)?;
            let right = finalize(data, budget, src, ledger, r, centres, weights)?;
            Ok(SplitTreeNode {
                level,
                decision: Some(decision),
                children: Some(vec![left, right]),
                leaf: None,
            })
        }
        BuildNode::Leaf { level, decision, indices, n_tilde, path } => {
            let centre = dp_average(
                data,
                &indices,
                n_tilde,
                budget.eps_avg,
                budget.delta_avg,
                &mut src.child("avg").child(&path).rng(),
            )?;
            ledger.record(MechanismKind::Avg, 0, budget.eps_avg, budget.delta_avg);
            centres.push(centre.clone());
            weights.push(n_tilde);
            Ok(SplitTreeNode {
                level,
                decision,
                children: None,
                leaf: Some(LeafInfo { centre, weight: n_tilde }),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn two_cluster_1d(seed: u64, n_per: usize, sigma: f64) -> Dataset {
        let src = RandomSource::new(seed).child("data");
        let mut rng = src.rng();
        let mut points = Vec::with_capacity(2 * n_per);
        for &centre in &[0.1, 0.9] {
            for _ in 0..n_per {
                let x: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * sigma + centre;
                points.push(vec![x.clamp(0.0, 1.0)]);
            }
        }
        Dataset::from_points(points, Interval::new(0.0, 1.0).unwrap()).unwrap()
    }

    fn test_budget(n: usize) -> PrivacyBudget {
        let delta = 1.0 / (n as f64 * (n as f64).sqrt());
        PrivacyBudget::new(0.04, 0.18, 0.18, 0.6, 0.2 * delta, 0.8 * delta).unwrap()
    }

    /// eps = 1 shifted toward counting: at n = 1000 the leaf counts dominate
    /// the centre error, so the small-data tests spend more budget there.
    fn small_data_budget() -> PrivacyBudget {
        let delta = 1e-2;
        PrivacyBudget::new(0.04, 0.40, 0.16, 0.40, 0.2 * delta, 0.8 * delta).unwrap()
    }

    #[test]
    fn decode_inverts_enumeration() {
        let range = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(decode_split_index(0, 1, 4, range, 0.25).unwrap(), (0, 0.125));
        assert_eq!(decode_split_index(5, 2, 4, range, 0.25).unwrap(), (1, 0.375));
        assert!(decode_split_index(8, 2, 4, range, 0.25).is_err());

        for d in 1..=5 {
            for per_dim in 1..=20 {
                let beta = range.width() / per_dim as f64;
                let cands = generate_candidates(range, d, beta).unwrap();
                assert_eq!(cands.len(), d * per_dim);
                for cand in &cands {
                    let (dim, pos) =
                        decode_split_index(cand.flat_index, d, per_dim, range, beta).unwrap();
                    assert_eq!(dim, cand.dimension);
                    assert!((pos - cand.position).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn separates_two_clear_clusters() {
        let n = 1000;
        let mut good = 0;
        let runs = 20;
        for seed in 0..runs {
            let data = two_cluster_1d(seed, n / 2, 0.004);
            let mut params = DpmParams::new(small_data_budget(), seed);
            params.tau_r = 3;
            params.alpha = 1.0;
            params.sigmas = vec![0.02];
            let result = fit(&data, &params).unwrap();
            if result.k() == 2 {
                let mut c: Vec<f64> = result.centres.iter().map(|c| c[0]).collect();
                c.sort_by(|a, b| a.partial_cmp(b).unwrap());
                if (c[0] - 0.1).abs() < 0.05 && (c[1] - 0.9).abs() < 0.05 {
                    good += 1;
                }
            }
        }
        assert!(good >= 18, "recovered both clusters in only {good}/{runs} seeds");
    }

    #[test]
    fn minimum_size_rule_keeps_single_cluster() {
        // one tight Gaussian, tau_e = n_tilde/2: any split starves a child
        let mut single = 0;
        let runs = 20;
        for seed in 100..100 + runs {
            let src = RandomSource::new(seed).child("data");
            let mut rng = src.rng();
            let points: Vec<Vec<f64>> = (0..1000)
                .map(|_| {
                    vec![(rng.sample::<f64, _>(rand_distr::StandardNormal) * 0.01 + 0.5)
                        .clamp(0.0, 1.0)]
                })
                .collect();
            let data = Dataset::from_points(points, Interval::new(0.0, 1.0).unwrap()).unwrap();
            let mut params = DpmParams::new(test_budget(1000), seed);
            params.tau_r = 1;
            params.tau_e = Some(500.0);
            params.sigmas = vec![0.02];
            let result = fit(&data, &params).unwrap();
            if result.k() == 1 {
                single += 1;
                let leaf = &result.split_tree;
                assert!(leaf.is_leaf());
                let dec = leaf.decision.as_ref().expect("halting leaf keeps its decision");
                assert!(!dec.applied);
            }
        }
        assert!(single >= 18, "halted at the root in only {single}/{runs} seeds");
    }

    #[test]
    fn level_zero_split_lands_between_clusters() {
        // two 1-d gaussians with gap >> 6 sigma at eps = 1: the root split
        // position falls between the cluster means in >= 90/100 seeds
        let mut between = 0;
        let runs = 100;
        for seed in 0..runs {
            let data = two_cluster_1d(seed, 500, 0.004);
            let mut params = DpmParams::new(small_data_budget(), seed);
            params.tau_r = 1;
            params.alpha = 1.0;
            params.sigmas = vec![0.02];
            let result = fit(&data, &params).unwrap();
            // with tau_r = 1 the root always attempts a split, applied or not
            let decision = result.split_tree.decision.as_ref().expect("root decision");
            if decision.position > 0.1 && decision.position < 0.9 {
                between += 1;
            }
        }
        assert!(between >= 90, "root split between the means in only {between}/{runs} runs");
    }

    #[test]
    fn report_matches_accountant_identity() {
        let data = two_cluster_1d(5, 500, 0.004);
        let budget = test_budget(1000);
        let mut params = DpmParams::new(budget, 5);
        params.tau_r = 3;
        params.sigmas = vec![0.02];
        let result = fit(&data, &params).unwrap();
        let expected =
            budget.eps_int + budget.eps_cnt + budget.eps_exp + budget.eps_avg;
        assert!((result.report.eps_total - expected).abs() < 1e-12);
    }

    #[test]
    fn beta_override_reports_interval_budget_unspent() {
        let data = two_cluster_1d(6, 500, 0.004);
        let budget = test_budget(1000);
        let mut params = DpmParams::new(budget, 6);
        params.tau_r = 3;
        params.beta = Some(0.02);
        let result = fit(&data, &params).unwrap();
        let expected = budget.eps_cnt + budget.eps_exp + budget.eps_avg;
        assert!((result.report.eps_total - expected).abs() < 1e-12);
        assert_eq!(result.beta, 0.02);
        assert!(!result
            .ledger
            .entries
            .iter()
            .any(|e| e.kind == MechanismKind::Interval));
    }

    #[test]
    fn empty_dataset_yields_single_noise_cluster() {
        let data = Dataset::empty(2, Interval::new(0.0, 1.0).unwrap()).unwrap();
        let params = DpmParams::new(test_budget(100), 3);
        let result = fit(&data, &params).unwrap();
        assert_eq!(result.k(), 1);
        assert!(!result.warnings.is_empty());
        assert_eq!(result.centres[0].len(), 2);
    }

    #[test]
    fn leaves_partition_the_dataset() {
        let data = two_cluster_1d(9, 400, 0.01);
        let mut params = DpmParams::new(test_budget(800), 9);
        params.tau_r = 4;
        params.sigmas = vec![0.02];
        let result = fit(&data, &params).unwrap();

        // walk the applied tree re-partitioning by hand; the leaf sets must
        // partition the index range exactly
        fn walk(node: &SplitTreeNode, idx: Vec<u32>, data: &Dataset, out: &mut Vec<Vec<u32>>) {
            match &node.children {
                None => out.push(idx),
                Some(kids) => {
                    let dec = node.decision.as_ref().unwrap();
                    let (l, r): (Vec<u32>, Vec<u32>) = idx
                        .into_iter()
                        .partition(|&i| data.coord(i as usize, dec.dimension) <= dec.position);
                    walk(&kids[0], l, data, out);
                    walk(&kids[1], r, data, out);
                }
            }
        }
        let mut sets = Vec::new();
        walk(&result.split_tree, (0..data.len() as u32).collect(), &data, &mut sets);
        assert_eq!(sets.len(), result.k());
        let mut all: Vec<u32> = sets.concat();
        all.sort();
        let expected: Vec<u32> = (0..data.len() as u32).collect();
        assert_eq!(all, expected);

        assert!(result.k() <= 1 << 4);
        assert!(result.split_tree.depth() <= 4);
        assert_eq!(result.weights.len(), result.k());
        assert_eq!(result.split_tree.leaf_count(), result.k());
    }

    #[test]
    fn identical_seeds_reproduce_results() {
        let data = two_cluster_1d(11, 300, 0.01);
        let mut params = DpmParams::new(test_budget(600), 11);
        params.tau_r = 3;
        params.sigmas = vec![0.02];
        let a = fit(&data, &params).unwrap();
        let b = fit(&data, &params).unwrap();
        assert_eq!(a.centres, b.centres);
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.split_tree, b.split_tree);
    }

    #[test]
    fn ledger_respects_parallel_composition() {
        let data = two_cluster_1d(13, 500, 0.01);
        let budget = test_budget(1000);
        let mut params = DpmParams::new(budget, 13);
        params.tau_r = 4;
        params.sigmas = vec![0.02];
        let result = fit(&data, &params).unwrap();

        // per level, all count calls share that level's budget
        for entry in &result.ledger.entries {
            match entry.kind {
                MechanismKind::Count => {
                    assert_eq!(entry.eps, result.report.per_level_eps_cnt[entry.level]);
                }
                MechanismKind::Exp => {
                    assert_eq!(entry.eps, result.report.per_level_eps_exp[entry.level]);
                }
                MechanismKind::Avg => assert_eq!(entry.eps, budget.eps_avg),
                MechanismKind::Interval => assert_eq!(entry.eps, budget.eps_int),
            }
        }
        assert!(result.ledger.effective_eps() <= result.report.eps_total + 1e-12);
    }
}
