//! Clustering-quality metrics, including the distance of a private
//! clustering to non-private KMeans references.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Interval};
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// All metrics of one evaluated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub k: usize,
    pub inertia: f64,
    pub silhouette: f64,
    /// Absent when the dataset carries no labels.
    pub accuracy: Option<f64>,
    pub kmeans_distance: f64,
    pub kmeans_distance_normalized: f64,
    /// Subsample cap the silhouette was computed under.
    pub silhouette_cap: usize,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Nearest-centre index per point; ties resolve to the lowest index.
pub fn assign(data: &Dataset, centres: &[Vec<f64>]) -> Result<Vec<usize>> {
    if centres.is_empty() {
        return Err(Error::domain("assignment needs at least one centre"));
    }
    Ok(data
        .points()
        .map(|p| {
            let mut best = 0usize;
            let mut best_dist = f64::INFINITY;
            for (j, c) in centres.iter().enumerate() {
                let dist = euclidean(p, c);
                if dist < best_dist {
                    best_dist = dist;
                    best = j;
                }
            }
            best
        })
        .collect())
}

/// Sum of Euclidean distances from each point to its assigned centre.
///
/// Distances are unsquared; [`inertia_squared`] provides the conventional
/// sum-of-squares variant for comparison with other tools.
pub fn inertia(data: &Dataset, centres: &[Vec<f64>]) -> Result<f64> {
    let labels = assign(data, centres)?;
    Ok(data
        .points()
        .zip(&labels)
        .map(|(p, &l)| euclidean(p, &centres[l]))
        .sum())
}

/// Sum of squared Euclidean distances to the assigned centres.
pub fn inertia_squared(data: &Dataset, centres: &[Vec<f64>]) -> Result<f64> {
    let labels = assign(data, centres)?;
    Ok(data
        .points()
        .zip(&labels)
        .map(|(p, &l)| {
            let d = euclidean(p, &centres[l]);
            d * d
        })
        .sum())
}

/// Mean silhouette coefficient over the nearest-centre partition.
///
/// Returns -1 when fewer than two clusters are populated. Points in
/// singleton clusters use `a(x) = 0`. Above `cap` points a seeded subsample
/// keeps the quadratic cost bounded.
pub fn silhouette(data: &Dataset, centres: &[Vec<f64>], cap: usize, seed: u64) -> Result<f64> {
    if centres.len() < 2 || data.len() < 2 {
        return Ok(-1.0);
    }
    let picked: Vec<usize> = if data.len() > cap.max(2) {
        let mut idx: Vec<usize> = (0..data.len()).collect();
        let mut rng = RandomSource::new(seed).child("silhouette-subsample").rng();
        // partial Fisher-Yates: the first `cap` entries are the sample
        for i in 0..cap {
            let j = i + rand::Rng::random_range(&mut rng, 0..(idx.len() - i));
            idx.swap(i, j);
        }
        let mut sample = idx[..cap].to_vec();
        sample.sort_unstable();
        sample
    } else {
        (0..data.len()).collect()
    };

    let labels = assign(data, centres)?;
    let k = centres.len();
    let mut cluster_sizes = vec![0usize; k];
    for &i in &picked {
        cluster_sizes[labels[i]] += 1;
    }
    if cluster_sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Ok(-1.0);
    }

    let total: f64 = picked
        .par_iter()
        .map(|&i| {
            let own = labels[i];
            let mut dist_sum = vec![0.0f64; k];
            for &j in &picked {
                if i == j {
                    continue;
                }
                dist_sum[labels[j]] += euclidean(data.point(i), data.point(j));
            }
            let a = if cluster_sizes[own] > 1 {
                dist_sum[own] / (cluster_sizes[own] - 1) as f64
            } else {
                0.0
            };
            let b = (0..k)
                .filter(|&c| c != own && cluster_sizes[c] > 0)
                .map(|c| dist_sum[c] / cluster_sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom == 0.0 {
                0.0
            } else {
                (b - a) / denom
            }
        })
        .sum();
    Ok(total / picked.len() as f64)
}

/// Fraction of points whose label matches their cluster's majority label.
/// Majority ties resolve to the smallest label.
pub fn accuracy(data: &Dataset, labels: &[i64], centres: &[Vec<f64>]) -> Result<f64> {
    if labels.len() != data.len() {
        return Err(Error::domain(format!(
            "got {} labels for {} points",
            labels.len(),
            data.len()
        )));
    }
    if data.is_empty() {
        return Ok(0.0);
    }
    let assignment = assign(data, centres)?;
    let k = centres.len();
    // counts[cluster] -> (label -> occurrences), kept sorted by label
    let mut counts: Vec<Vec<(i64, usize)>> = vec![Vec::new(); k];
    for (&cluster, &label) in assignment.iter().zip(labels) {
        let bucket = &mut counts[cluster];
        match bucket.binary_search_by_key(&label, |&(l, _)| l) {
            Ok(pos) => bucket[pos].1 += 1,
            Err(pos) => bucket.insert(pos, (label, 1)),
        }
    }
    let majority: Vec<Option<i64>> = counts
        .iter()
        .map(|bucket| {
            bucket
                .iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|&(l, _)| l)
        })
        .collect();
    let hits = assignment
        .iter()
        .zip(labels)
        .filter(|(&cluster, &label)| majority[cluster] == Some(label))
        .count();
    Ok(hits as f64 / data.len() as f64)
}

/// Mean over reference centre-sets of the summed distances from each private
/// centre to its nearest reference centre.
pub fn kmeans_distance(reference_runs: &[Vec<Vec<f64>>], private_centres: &[Vec<f64>]) -> Result<f64> {
    if reference_runs.is_empty() {
        return Err(Error::domain("kmeans distance needs at least one reference run"));
    }
    if private_centres.is_empty() {
        return Err(Error::domain("kmeans distance needs at least one private centre"));
    }
    let mut total = 0.0;
    for reference in reference_runs {
        if reference.is_empty() {
            return Err(Error::domain("reference centre sets must not be empty"));
        }
        for c in private_centres {
            total += reference
                .iter()
                .map(|r| euclidean(c, r))
                .fold(f64::INFINITY, f64::min);
        }
    }
    Ok(total / reference_runs.len() as f64)
}

/// Raw KMeans distance as a per-centre fraction of the data-ball radius:
/// `raw / (k_priv * ((b-a)/2) * sqrt(d))`.
pub fn kmeans_distance_normalized(raw_kd: f64, k_priv: usize, range: Interval, d: usize) -> f64 {
    let radius = 0.5 * range.width() * (d as f64).sqrt();
    raw_kd / (k_priv.max(1) as f64 * radius)
}
