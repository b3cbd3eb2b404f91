//! Differentially private primitive mechanisms.
//!
//! Laplace counts with an underestimation offset, the Exponential Mechanism,
//! Gaussian averaging, single-quantile selection over gaps, and the geometric
//! per-level budget scheduler.

use rand::Rng;

use crate::dataset::{Dataset, Interval};
use crate::error::{Error, Result};

/// A Laplace-noised set size.
///
/// The value may fall below the true count or even below zero; consumers must
/// clamp wherever a positive count is required.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyCount {
    pub value: f64,
    pub eps_used: f64,
    pub level: usize,
}

impl NoisyCount {
    pub fn at_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    /// The value clamped below at 1, for use as a denominator.
    pub fn clamped(&self) -> f64 {
        self.value.max(1.0)
    }
}

/// Per-recursion-level privacy budgets, geometrically increasing so that the
/// smaller subsets of deeper levels receive more budget.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetSchedule {
    pub per_level: Vec<f64>,
}

impl BudgetSchedule {
    pub fn total(&self) -> f64 {
        self.per_level.iter().sum()
    }
}

/// Laplace quantile function: maps a uniform `u` in (0, 1) to the
/// zero-centred Laplace distribution with the given scale.
pub fn laplace_inv_cdf(u: f64, scale: f64) -> f64 {
    let c = u - 0.5;
    -scale * c.signum() * (1.0 - 2.0 * c.abs()).ln()
}

/// Draw one sample from the zero-centred Laplace distribution via inverse CDF
/// from a single uniform draw.
pub fn laplace(scale: f64, rng: &mut impl Rng) -> Result<f64> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("laplace scale must be positive, got {scale}")));
    }
    let mut u: f64 = rng.random();
    if u == 0.0 {
        u = f64::MIN_POSITIVE;
    }
    Ok(laplace_inv_cdf(u, scale))
}

/// Noisy set size: `count + Lap(1/eps)`.
///
/// The Laplace scale is `1/eps` (count queries have sensitivity 1), so the
/// mechanism is `(eps, 0)`-DP.
pub fn noisy_count(true_count: usize, eps: f64, rng: &mut impl Rng) -> Result<NoisyCount> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("noisy_count eps must be positive, got {eps}")));
    }
    let noise = laplace(1.0 / eps, rng)?;
    Ok(NoisyCount { value: true_count as f64 + noise, eps_used: eps, level: 0 })
}

/// Offset `lambda = -ln(2*delta)/eps` subtracted from a noisy count so the
/// true size is underestimated except with probability `delta`.
pub fn count_offset(delta_level: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("count_offset eps must be positive, got {eps}")));
    }
    if !(delta_level > 0.0 && delta_level < 0.5) {
        return Err(Error::domain(format!(
            "count_offset delta must lie in (0, 0.5), got {delta_level}"
        )));
    }
    Ok(-(2.0 * delta_level).ln() / eps)
}

/// Draw an index with probability proportional to
/// `exp(eps * score[i] / (2 * sensitivity))`.
///
/// The maximum score is subtracted before exponentiation, so the selection is
/// numerically stable and exactly invariant under shifting all scores by a
/// constant. The factor 2 in the exponent covers scoring functions that are
/// not monotone under point addition.
pub fn exponential_mechanism(
    scores: &[f64],
    sensitivity: f64,
    eps: f64,
    rng: &mut impl Rng,
) -> Result<usize> {
    if scores.is_empty() {
        return Err(Error::domain("exponential_mechanism needs at least one candidate"));
    }
    if !(sensitivity > 0.0 && sensitivity.is_finite()) {
        return Err(Error::domain(format!(
            "exponential_mechanism sensitivity must be positive, got {sensitivity}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!(
            "exponential_mechanism eps must be positive, got {eps}"
        )));
    }
    let mut max = f64::NEG_INFINITY;
    for &s in scores {
        if !s.is_finite() {
            return Err(Error::domain(format!("non-finite score {s}")));
        }
        if s > max {
            max = s;
        }
    }
    let scale = eps / (2.0 * sensitivity);
    let weights: Vec<f64> = scores.iter().map(|&s| (scale * (s - max)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return Ok(i);
        }
    }
    Ok(scores.len() - 1)
}

/// Differentially private average of a point subset.
///
/// Points are shifted by the range midpoint, the coordinate sums receive
/// Gaussian noise with `sigma = delta_2 * sqrt(2 ln(1.25/delta)) / eps` where
/// `delta_2 = ((b-a)/2) * sqrt(d)` is the radius of the shifted data ball
/// (the add-one neighbouring sensitivity of the sum), and the result is
/// divided by the clamped noisy count and shifted back.
pub fn dp_average(
    data: &Dataset,
    indices: &[u32],
    noisy_count: f64,
    eps: f64,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("dp_average eps must be positive, got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("dp_average delta must lie in (0, 1), got {delta}")));
    }
    let d = data.dim();
    let range = data.range();
    let mid = range.midpoint();
    let l2_sensitivity = 0.5 * range.width() * (d as f64).sqrt();
    let sigma = l2_sensitivity * (2.0 * (1.25 / delta).ln()).sqrt() / eps;

    let mut sums = vec![0.0f64; d];
    for &i in indices {
        let p = data.point(i as usize);
        for j in 0..d {
            sums[j] += p[j] - mid;
        }
    }
    let denom = noisy_count.max(1.0);
    let mut out = Vec::with_capacity(d);
    for s in sums {
        let noise: f64 = rng.sample::<f64, _>(rand_distr::StandardNormal) * sigma;
        out.push((s + noise) / denom + mid);
    }
    Ok(out)
}

/// Exponential-Mechanism single-quantile selection over gaps.
///
/// The sorted, bound-clamped values induce `m+1` gaps (the two bounds act as
/// sentinels). Gap `i` is selected with probability proportional to
/// `width_i * exp(eps * -(|i - k|) / (2 * sensitivity))` where
/// `k = ceil(p*m/100)` is the target rank; zero-width gaps carry zero
/// probability. A uniform draw within the selected gap is returned.
///
/// Use sensitivity 2 when the values are neighbour gaps of a dataset and 1
/// for raw data.
pub fn dp_percentile(
    values: &[f64],
    p: f64,
    eps: f64,
    bounds: Interval,
    sensitivity: f64,
    rng: &mut impl Rng,
) -> Result<f64> {
    if !(p > 0.0 && p < 100.0) {
        return Err(Error::domain(format!("percentile must lie in (0, 100), got {p}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("dp_percentile eps must be positive, got {eps}")));
    }
    if !(sensitivity > 0.0 && sensitivity.is_finite()) {
        return Err(Error::domain(format!(
            "dp_percentile sensitivity must be positive, got {sensitivity}"
        )));
    }
    if values.is_empty() {
        return Ok(bounds.lo + rng.random::<f64>() * bounds.width());
    }

    let mut sorted: Vec<f64> = values
        .iter()
        .map(|&v| v.clamp(bounds.lo, bounds.hi))
        .collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = sorted.len();

    // boundaries lo, v_0, ..., v_{m-1}, hi delimit m+1 gaps
    let boundary = |i: usize| -> f64 {
        if i == 0 {
            bounds.lo
        } else if i <= m {
            sorted[i - 1]
        } else {
            bounds.hi
        }
    };
    let k = ((p * m as f64) / 100.0).ceil() as i64;
    let scale = eps / (2.0 * sensitivity);

    // log-domain weights: ln(width) - scale*|i-k|, stable for huge eps
    let mut best = f64::NEG_INFINITY;
    let mut log_w = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let width = boundary(i + 1) - boundary(i);
        let lw = width.ln() - scale * (i as i64 - k).abs() as f64;
        log_w.push(lw);
        if lw > best {
            best = lw;
        }
    }
    if best == f64::NEG_INFINITY {
        // all gaps degenerate: bounds collapse onto the data
        return Ok(bounds.lo);
    }
    let weights: Vec<f64> = log_w.iter().map(|&lw| (lw - best).exp()).collect();
    let total: f64 = weights.iter().sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut chosen = m;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            chosen = i;
            break;
        }
    }
    let lo = boundary(chosen);
    let hi = boundary(chosen + 1);
    Ok(lo + rng.random::<f64>() * (hi - lo))
}

/// Split a total budget over `levels` recursion levels with weights
/// `sqrt(2^i)`, minimising the overall noise under exponentially shrinking
/// subset sizes.
pub fn budget_schedule(total_eps: f64, levels: usize) -> Result<BudgetSchedule> {
    if levels == 0 {
        return Err(Error::domain("budget_schedule needs at least one level"));
    }
    if !(total_eps > 0.0 && total_eps.is_finite()) {
        return Err(Error::domain(format!(
            "budget_schedule total eps must be positive, got {total_eps}"
        )));
    }
    let weights: Vec<f64> = (0..levels).map(|i| (0.5 * i as f64).exp2()).collect();
    let sum: f64 = weights.iter().sum();
    let per_level = weights.iter().map(|w| total_eps * w / sum).collect();
    Ok(BudgetSchedule { per_level })
}
