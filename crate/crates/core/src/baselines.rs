//! Non-private baselines: KMeans++ with Lloyd iterations (the reference for
//! the KMeans-distance metric) and a Gaussian-mixture generator for
//! synthetic benchmarks.

use rand::Rng;
use rayon::prelude::*;

use crate::dataset::{Dataset, Interval};
use crate::error::{Error, Result};
use crate::metrics::silhouette;
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub max_iters: usize,
    pub n_init: usize,
    pub tol: f64,
    pub seed: u64,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansConfig { k, max_iters: 100, n_init: 1, tol: 1e-6, seed }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub centres: Vec<Vec<f64>>,
    /// Lloyd objective: sum of squared distances to the assigned centres.
    pub inertia: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centres: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centres.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    (best, best_d)
}

/// KMeans++ seeding followed by Lloyd iterations until the centres move less
/// than `tol` or `max_iters` is reached; the best of `n_init` restarts wins.
pub fn kmeans_fit(data: &Dataset, config: &KMeansConfig) -> Result<KMeansFit> {
    if config.k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if config.k > data.len() {
        return Err(Error::domain(format!(
            "k = {} exceeds the {} data points",
            config.k,
            data.len()
        )));
    }
    if config.max_iters == 0 || config.n_init == 0 {
        return Err(Error::domain("max_iters and n_init must be at least 1"));
    }
    let base = RandomSource::new(config.seed).child(format!("kmeans/{}", config.k));
    let mut best: Option<KMeansFit> = None;
    for restart in 0..config.n_init {
        let fit = kmeans_single(data, config.k, config.max_iters, config.tol, &base.child(restart.to_string()))?;
        let better = match &best {
            None => true,
            Some(b) => fit.inertia < b.inertia,
        };
        if better {
            best = Some(fit);
        }
    }
    Ok(best.unwrap())
}

fn kmeans_single(
    data: &Dataset,
    k: usize,
    max_iters: usize,
    tol: f64,
    src: &RandomSource,
) -> Result<KMeansFit> {
    let n = data.len();
    let d = data.dim();
    let mut rng = src.rng();

    // D^2 seeding
    let mut centres: Vec<Vec<f64>> = Vec::with_capacity(k);
    centres.push(data.point(rng.random_range(0..n)).to_vec());
    let mut dist_sq: Vec<f64> = (0..n)
        .map(|i| squared_distance(data.point(i), &centres[0]))
        .collect();
    while centres.len() < k {
        let total: f64 = dist_sq.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &w) in dist_sq.iter().enumerate() {
                u -= w;
                if u <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centres.push(data.point(pick).to_vec());
        for i in 0..n {
            let d2 = squared_distance(data.point(i), centres.last().unwrap());
            if d2 < dist_sq[i] {
                dist_sq[i] = d2;
            }
        }
    }

    let mut labels = vec![0usize; n];
    let mut previous_inertia = f64::INFINITY;
    for _ in 0..max_iters {
        let mut inertia = 0.0;
        for i in 0..n {
            let (j, d2) = nearest(data.point(i), &centres);
            labels[i] = j;
            inertia += d2;
        }
        // Lloyd never increases the squared objective
        debug_assert!(inertia <= previous_inertia * (1.0 + 1e-12) + 1e-9);
        previous_inertia = inertia;

        let mut sums = vec![vec![0.0f64; d]; k];
        let mut sizes = vec![0usize; k];
        for i in 0..n {
            sizes[labels[i]] += 1;
            for j in 0..d {
                sums[labels[i]][j] += data.coord(i, j);
            }
        }
        let mut movement = 0.0f64;
        for c in 0..k {
            if sizes[c] == 0 {
                // reseed an empty cluster to the farthest point
                let far = (0..n)
                    .max_by(|&a, &b| {
                        squared_distance(data.point(a), &centres[labels[a]])
                            .partial_cmp(&squared_distance(data.point(b), &centres[labels[b]]))
                            .unwrap()
                    })
                    .unwrap();
                let new_centre = data.point(far).to_vec();
                movement = movement.max(squared_distance(&new_centre, &centres[c]).sqrt());
                centres[c] = new_centre;
                labels[far] = c;
            } else {
                let mut new_centre = sums[c].clone();
                for v in &mut new_centre {
                    *v /= sizes[c] as f64;
                }
                movement = movement.max(squared_distance(&new_centre, &centres[c]).sqrt());
                centres[c] = new_centre;
            }
        }
        if movement < tol {
            break;
        }
    }
    // final assignment pass so the reported inertia matches the centres
    let inertia = (0..n).map(|i| nearest(data.point(i), &centres).1).sum();
    Ok(KMeansFit { centres, inertia })
}

/// Hyper-parameter search for the KMeans-distance reference: run KMeans for
/// every candidate `k` and restart, rank all runs by silhouette, return the
/// `top_l` centre-sets.
pub fn reference_runs(
    data: &Dataset,
    k_candidates: &[usize],
    runs_per_k: usize,
    top_l: usize,
    seed: u64,
    silhouette_cap: usize,
) -> Result<Vec<Vec<Vec<f64>>>> {
    if k_candidates.is_empty() {
        return Err(Error::domain("need at least one candidate k"));
    }
    if runs_per_k == 0 || top_l == 0 {
        return Err(Error::domain("runs_per_k and top_l must be at least 1"));
    }
    let base = RandomSource::new(seed);
    let mut jobs = Vec::new();
    for &k in k_candidates {
        if k == 0 || k > data.len() {
            return Err(Error::domain(format!(
                "candidate k = {k} is invalid for {} points",
                data.len()
            )));
        }
        for r in 0..runs_per_k {
            jobs.push((k, r));
        }
    }
    let mut runs: Vec<(f64, usize, usize, Vec<Vec<f64>>)> = jobs
        .par_iter()
        .map(|&(k, r)| -> Result<_> {
            let src = base.child(format!("kmeans/{k}/{r}"));
            let fit = kmeans_single(data, k, 100, 1e-6, &src)?;
            // one fixed ranking seed: all runs are scored on the same subsample
            let silh = silhouette(data, &fit.centres, silhouette_cap, seed)?;
            Ok((silh, k, r, fit.centres))
        })
        .collect::<Result<_>>()?;
    runs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    Ok(runs.into_iter().take(top_l).map(|(_, _, _, c)| c).collect())
}

/// Sample `k * floor(n/k)` labelled points from `k` spherical Gaussians with
/// pairwise mean distance at least `separation * sigma`, clipped to the
/// range. Returns the dataset, the labels and the true means.
pub fn generate_mixture(
    k: usize,
    n: usize,
    d: usize,
    separation: f64,
    sigma: f64,
    range: Interval,
    seed: u64,
) -> Result<(Dataset, Vec<i64>, Vec<Vec<f64>>)> {
    if k == 0 || d == 0 {
        return Err(Error::domain("k and d must be at least 1"));
    }
    if n < k {
        return Err(Error::domain(format!("n = {n} is fewer than k = {k} clusters")));
    }
    if !(sigma > 0.0 && separation >= 0.0) {
        return Err(Error::domain("sigma must be positive and separation non-negative"));
    }
    let src = RandomSource::new(seed);
    let min_dist = separation * sigma;
    // keep means away from the borders when the range allows it
    let margin = (3.0 * sigma).min(0.25 * range.width());
    let (lo, hi) = (range.lo + margin, range.hi - margin);

    let mut means: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut rng = src.child("means").rng();
    let mut attempts = 0usize;
    while means.len() < k {
        attempts += 1;
        if attempts > 100_000 {
            return Err(Error::domain(format!(
                "could not place {k} means at pairwise distance {min_dist} in the range"
            )));
        }
        let cand: Vec<f64> = (0..d).map(|_| rng.random_range(lo..hi)).collect();
        let ok = means
            .iter()
            .all(|m| squared_distance(m, &cand).sqrt() >= min_dist);
        if ok {
            means.push(cand);
        }
    }

    let per_cluster = n / k;
    let mut points = Vec::with_capacity(k * per_cluster);
    let mut labels = Vec::with_capacity(k * per_cluster);
    for (c, mean) in means.iter().enumerate() {
        let mut rng = src.child(format!("cluster/{c}")).rng();
        for _ in 0..per_cluster {
            let p: Vec<f64> = mean
                .iter()
                .map(|&m| {
                    (rng.sample::<f64, _>(rand_distr::StandardNormal) * sigma + m)
                        .clamp(range.lo, range.hi)
                })
                .collect();
            points.push(p);
            labels.push(c as i64);
        }
    }
    Ok((Dataset::from_points(points, range)?, labels, means))
}
