//! Privacy-preserving calibration of the split-interval size.
//!
//! The spread of a dataset is estimated from the 65th percentile of the
//! dimension-averaged gaps between neighbouring points. The same statistic is
//! precomputed for synthetic Gaussians of candidate standard deviations; the
//! candidate whose percentile is closest to the privately computed one wins,
//! and the split interval size is half that standard deviation.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Interval};
use crate::error::{Error, Result};
use crate::mech::dp_percentile;
use crate::rng::RandomSource;

/// Mapping from candidate standard deviations to the gap percentile each one
/// produces on synthetic data of the same shape as the input.
///
/// Serializes as a plain list of entries, the on-disk cache format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SigmaTable {
    pub entries: Vec<SigmaEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaEntry {
    pub sigma: f64,
    pub percentile: f64,
    pub n: u64,
    pub d: usize,
}

/// Ascending sort followed by consecutive absolute differences.
pub fn neighbour_gaps(axis: &[f64]) -> Result<Vec<f64>> {
    if axis.len() < 2 {
        return Err(Error::domain(format!(
            "neighbour gaps need at least 2 values, got {}",
            axis.len()
        )));
    }
    let mut sorted = axis.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(sorted.windows(2).map(|w| (w[1] - w[0]).abs()).collect())
}

/// Element-wise mean across dimensions of each dimension's gap sequence.
pub fn averaged_gap_profile(data: &Dataset) -> Result<Vec<f64>> {
    if data.len() < 2 {
        return Err(Error::domain(format!(
            "gap profile needs at least 2 points, got {}",
            data.len()
        )));
    }
    let d = data.dim();
    let mut profile = vec![0.0f64; data.len() - 1];
    for dim in 0..d {
        let axis: Vec<f64> = (0..data.len()).map(|i| data.coord(i, dim)).collect();
        for (acc, gap) in profile.iter_mut().zip(neighbour_gaps(&axis)?) {
            *acc += gap;
        }
    }
    for acc in &mut profile {
        *acc /= d as f64;
    }
    Ok(profile)
}

/// Nearest-rank percentile of an unsorted sequence: the `ceil(p*m/100)`-th
/// smallest value.
fn percentile_nearest_rank(values: &[f64], p: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = sorted.len();
    let k = ((p * m as f64) / 100.0).ceil() as usize;
    sorted[k.clamp(1, m) - 1]
}

/// Build the sigma -> percentile lookup table from synthetic data.
///
/// For each candidate, `floor(n_tilde)` points are drawn from the isotropic
/// Gaussian of that standard deviation and the non-private 65th percentile of
/// their averaged gap profile is recorded. The table only depends on the
/// noisy count, never on the data itself.
pub fn build_sigma_table(
    sigmas: &[f64],
    n_tilde: f64,
    d: usize,
    rng: &RandomSource,
) -> Result<SigmaTable> {
    if sigmas.is_empty() {
        return Err(Error::domain("sigma candidate list must not be empty"));
    }
    for &s in sigmas {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::domain(format!("sigma candidates must be positive, got {s}")));
        }
    }
    if d == 0 {
        return Err(Error::domain("need at least one dimension"));
    }
    let n = n_tilde.floor();
    if n < 2.0 {
        return Err(Error::domain(format!(
            "noisy count {n_tilde} leaves fewer than 2 synthetic points"
        )));
    }
    let n = n as usize;

    let entries: Vec<SigmaEntry> = sigmas
        .par_iter()
        .enumerate()
        .map(|(idx, &sigma)| -> Result<SigmaEntry> {
            let mut rng = rng.child(format!("sigma/{idx}")).rng();
            // per-dimension gap profiles of a synthetic N(0, sigma^2 I_d) sample
            let mut profile = vec![0.0f64; n - 1];
            let mut axis = vec![0.0f64; n];
            for _ in 0..d {
                for x in axis.iter_mut() {
                    *x = rng.sample::<f64, _>(rand_distr::StandardNormal) * sigma;
                }
                axis.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (acc, w) in profile.iter_mut().zip(axis.windows(2)) {
                    *acc += w[1] - w[0];
                }
            }
            for acc in &mut profile {
                *acc /= d as f64;
            }
            Ok(SigmaEntry {
                sigma,
                percentile: percentile_nearest_rank(&profile, 65.0),
                n: n as u64,
                d,
            })
        })
        .collect::<Result<_>>()?;

    Ok(SigmaTable { entries })
}

/// Estimate the split interval size `beta = sigma*/2`.
///
/// The only access to the private data is one DP percentile call (sensitivity
/// 2, since the inputs are neighbour gaps) over the averaged gap profile; the
/// table lookup and the division are post-processing.
pub fn interval_size(
    data: &Dataset,
    n_tilde: f64,
    eps_int: f64,
    sigmas: &[f64],
    rng: &RandomSource,
) -> Result<f64> {
    let table = build_sigma_table(sigmas, n_tilde, data.dim(), &rng.child("table"))?;
    interval_size_with_table(data, &table, eps_int, rng)
}

/// As [`interval_size`] but with a prebuilt (possibly cached) table.
pub fn interval_size_with_table(
    data: &Dataset,
    table: &SigmaTable,
    eps_int: f64,
    rng: &RandomSource,
) -> Result<f64> {
    if data.len() < 2 {
        return Err(Error::domain(format!(
            "interval size estimation needs at least 2 points, got {}",
            data.len()
        )));
    }
    if table.entries.is_empty() {
        return Err(Error::domain("sigma table must not be empty"));
    }
    let profile = averaged_gap_profile(data)?;
    let bounds = Interval::new(0.0, data.range().width())?;
    let p_tilde = dp_percentile(
        &profile,
        65.0,
        eps_int,
        bounds,
        2.0,
        &mut rng.child("percentile").rng(),
    )?;

    // nearest recorded percentile in absolute difference, ties toward the
    // smaller sigma
    let mut best: Option<&SigmaEntry> = None;
    for entry in &table.entries {
        let better = match best {
            None => true,
            Some(b) => {
                let (db, de) = ((b.percentile - p_tilde).abs(), (entry.percentile - p_tilde).abs());
                de < db || (de == db && entry.sigma < b.sigma)
            }
        };
        if better {
            best = Some(entry);
        }
    }
    Ok(0.5 * best.unwrap().sigma)
}

/// Expected minimal emptiness at a recursion level: `1 - base_fill * 2^level`
/// where `base_fill` is the fullest split interval's share of the root count.
/// Diagnostic only; may go negative.
pub fn minimal_emptiness(level: u32, base_fill: f64) -> f64 {
    1.0 - base_fill * (level as f64).exp2()
}
