//! Computable diagnostics for the utility theory: tail and deficit bounds on
//! the noisy count and the Exponential Mechanism selection.
//!
//! The evaluators are public so reports can print bound tables; the
//! statistical validators checking the implementation against them live in
//! the test suite.

/// Tail bound on the shifted noisy count:
/// `P[|count_noisy - lambda - count| > kappa] <= min(1, exp(-kappa*eps)/(2*delta))`.
pub fn noisy_count_tail(kappa: f64, eps_cnt: f64, delta: f64) -> f64 {
    (0.5 * (-kappa * eps_cnt).exp() / delta).min(1.0)
}

/// Score-deficit bound of the Exponential Mechanism: with probability at
/// least `1 - exp(-kappa)` the selected score exceeds
/// `OPT - (omega + (2*delta_f/eps) * (ln(W/W_opt) + kappa))`.
pub fn em_utility_bound(
    candidates: usize,
    near_optimal: usize,
    omega: f64,
    kappa: f64,
    delta_f: f64,
    eps: f64,
) -> f64 {
    let ratio = candidates as f64 / near_optimal as f64;
    omega + (2.0 * delta_f / eps) * (ratio.ln() + kappa)
}

/// Emptiness-deficit bound for a selected central split: with probability at
/// least `1 - exp(-kappa)` the chosen split's emptiness falls short of the
/// optimum by less than
/// `((2t/(q*alpha) + 2)/((n_tilde - lambda)*eps)) * (ln(W/W_opt) + kappa + omega)
///  + (1 - t_prime)/alpha`.
#[allow(clippy::too_many_arguments)]
pub fn central_emptiness_deficit(
    t_prime: f64,
    t: f64,
    q: f64,
    alpha: f64,
    n_tilde: f64,
    lambda: f64,
    eps: f64,
    candidates: usize,
    near_optimal: usize,
    kappa: f64,
    omega: f64,
) -> f64 {
    let factor = (2.0 * t / (q * alpha) + 2.0) / ((n_tilde - lambda) * eps);
    let ratio = candidates as f64 / near_optimal as f64;
    factor * (ratio.ln() + kappa + omega) + (1.0 - t_prime) / alpha
}

/// Probability that the Exponential Mechanism selects a central split, given
/// the grouped weight sums `1 / (L_lt / L_ge + 1)`. The complement is the
/// halting-side probability.
pub fn central_selection_probability(l_lt: f64, l_ge: f64) -> f64 {
    1.0 / (l_lt / l_ge + 1.0)
}
