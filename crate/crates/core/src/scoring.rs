//! Split candidates and the emptiness/centreness scoring function.
//!
//! Candidates are the centres of equal-width intervals tiling each dimension
//! of the public range. A candidate's score rewards sparse intervals
//! (emptiness) and ranks close to the median (centreness); its sensitivity
//! bound drives the Exponential Mechanism's noise.

use crate::dataset::{Dataset, Interval};
use crate::error::{Error, Result};

/// A (dimension, position) split candidate with its interval and flat index.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub dimension: usize,
    pub position: f64,
    /// `[position - beta/2, position + beta/2]`, closed on both ends.
    pub interval: (f64, f64),
    pub flat_index: usize,
}

/// Scoring parameters: centreness shape `(t, q)`, emptiness weight `alpha`
/// and the split interval size `beta` in data units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreParams {
    pub t: f64,
    pub q: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ScoreParams {
    pub fn new(t: f64, q: f64, alpha: f64, beta: f64) -> Result<Self> {
        validate_tq(t, q)?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        Ok(ScoreParams { t, q, alpha, beta })
    }
}

/// `t >= 2q > 0` and `t <= 1` are the valid centreness parameters.
pub fn validate_tq(t: f64, q: f64) -> Result<()> {
    if !(q > 0.0 && t >= 2.0 * q && t <= 1.0) {
        return Err(Error::domain(format!(
            "centreness parameters need t >= 2q > 0 and t <= 1, got t = {t}, q = {q}"
        )));
    }
    Ok(())
}

/// Read access to one dimension of a subset, sorted ascending.
///
/// Implemented both by plain slices and by index views into a [`Dataset`], so
/// the recursion can score subsets without copying coordinates.
pub trait SortedAxis {
    fn len(&self) -> usize;
    fn value(&self, i: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of values strictly below `x`.
    fn count_lt(&self, x: f64) -> usize {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.value(mid) < x {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Number of values less than or equal to `x`.
    fn count_le(&self, x: f64) -> usize {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.value(mid) <= x {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

impl SortedAxis for [f64] {
    fn len(&self) -> usize {
        <[f64]>::len(self)
    }

    fn value(&self, i: usize) -> f64 {
        self[i]
    }
}

/// One dimension of a dataset subset given by indices sorted by that
/// dimension's coordinate.
#[derive(Clone, Copy)]
pub struct DimView<'a> {
    pub data: &'a Dataset,
    pub indices: &'a [u32],
    pub dimension: usize,
}

impl SortedAxis for DimView<'_> {
    fn len(&self) -> usize {
        self.indices.len()
    }

    fn value(&self, i: usize) -> f64 {
        self.data.coord(self.indices[i] as usize, self.dimension)
    }
}

/// Number of split intervals per dimension: `ceil((b - a) / beta)`, so the
/// tiling always covers the whole range (the last interval may overhang).
pub fn num_splits(range: Interval, beta: f64) -> Result<usize> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain(format!("beta must be positive, got {beta}")));
    }
    let ratio = range.width() / beta;
    // guard against 1/0.1 = 10.000000000000002-style float noise
    let n = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
        ratio.round()
    } else {
        ratio.ceil()
    };
    Ok((n as usize).max(1))
}

/// Enumerate all candidates dimension-major: candidate `j` of dimension `i`
/// has `flat_index = i * num_splits + j` and position `a + (j + 0.5) * beta`.
pub fn generate_candidates(range: Interval, d: usize, beta: f64) -> Result<Vec<SplitCandidate>> {
    if d == 0 {
        return Err(Error::domain("need at least one dimension"));
    }
    let per_dim = num_splits(range, beta)?;
    let mut out = Vec::with_capacity(d * per_dim);
    for dim in 0..d {
        for j in 0..per_dim {
            let position = range.lo + (j as f64 + 0.5) * beta;
            out.push(SplitCandidate {
                dimension: dim,
                position,
                interval: (position - 0.5 * beta, position + 0.5 * beta),
                flat_index: dim * per_dim + j,
            });
        }
    }
    Ok(out)
}

/// Emptiness subscore: `1 - |s| / n_tilde` where `|s|` counts the values
/// inside the candidate's closed interval.
///
/// Can go negative when the noisy count underestimates the subset; that is
/// passed through unclamped so the selection pmf stays undistorted.
pub fn emptiness<A: SortedAxis + ?Sized>(axis: &A, cand: &SplitCandidate, n_tilde: f64) -> f64 {
    let n = n_tilde.max(1.0);
    let inside = axis.count_le(cand.interval.1) - axis.count_lt(cand.interval.0);
    1.0 - inside as f64 / n
}

/// Left-insertion rank of a position: the number of values strictly below it.
pub fn rank_of<A: SortedAxis + ?Sized>(position: f64, axis: &A) -> usize {
    axis.count_lt(position)
}

/// Centreness subscore: a two-piece linear function of the rank, 1 at the
/// median and 0 at the borders, with knees of height `t` at the `q`-quantiles.
/// Ranks outside `[0, n_tilde]` are clamped to the nearest endpoint.
pub fn centreness(rank: usize, n_tilde: f64, t: f64, q: f64) -> Result<f64> {
    validate_tq(t, q)?;
    let m = n_tilde.max(1.0);
    let r = (rank as f64).clamp(0.0, m);
    let half = 0.5 * m;
    let mq = m * q;
    let dist = half - (r - half).abs();
    // closed outer quantiles [0, mq] u [m - mq, m], open inner quantile
    if r <= mq || r >= m - mq {
        Ok(dist * t / mq)
    } else {
        Ok((t - 2.0 * q) / (1.0 - 2.0 * q) + dist * (1.0 - t) / (half - mq))
    }
}

/// The compound score `centreness + alpha * emptiness` of one candidate.
pub fn score<A: SortedAxis + ?Sized>(
    axis: &A,
    cand: &SplitCandidate,
    n_tilde: f64,
    params: &ScoreParams,
) -> Result<f64> {
    let c = centreness(rank_of(cand.position, axis), n_tilde, params.t, params.q)?;
    let e = emptiness(axis, cand, n_tilde);
    Ok(c + params.alpha * e)
}

/// Sensitivity bound of the score under point addition:
/// `(t/q + alpha) / max(n_tilde - lambda, 1)`.
pub fn score_sensitivity(params: &ScoreParams, n_tilde: f64, lambda: f64) -> f64 {
    (params.t / params.q + params.alpha) / (n_tilde - lambda).max(1.0)
}
