//! Privacy budgets and the composed privacy accountant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mech::{budget_schedule, count_offset};

/// The per-mechanism privacy budget consumed by one clustering run: epsilons
/// for interval-size estimation, counting, split selection and averaging,
/// plus the deltas of the count offset and the Gaussian averaging.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    pub eps_int: f64,
    pub eps_cnt: f64,
    pub eps_exp: f64,
    pub eps_avg: f64,
    pub delta_cnt: f64,
    pub delta_avg: f64,
}

impl PrivacyBudget {
    pub fn new(
        eps_int: f64,
        eps_cnt: f64,
        eps_exp: f64,
        eps_avg: f64,
        delta_cnt: f64,
        delta_avg: f64,
    ) -> Result<Self> {
        let budget = PrivacyBudget { eps_int, eps_cnt, eps_exp, eps_avg, delta_cnt, delta_avg };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, eps) in [
            ("eps_int", self.eps_int),
            ("eps_cnt", self.eps_cnt),
            ("eps_exp", self.eps_exp),
            ("eps_avg", self.eps_avg),
        ] {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {eps}")));
            }
        }
        for (name, delta) in [("delta_cnt", self.delta_cnt), ("delta_avg", self.delta_avg)] {
            if !(delta > 0.0 && delta <= 1.0) {
                return Err(Error::domain(format!("{name} must lie in (0, 1], got {delta}")));
            }
        }
        Ok(())
    }
}

/// The composed privacy guarantee of a run together with the per-level
/// schedules it was derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyReport {
    pub eps_total: f64,
    pub delta_total: f64,
    pub per_level_eps_cnt: Vec<f64>,
    pub per_level_eps_exp: Vec<f64>,
    pub per_level_lambda: Vec<f64>,
}

/// Compose the budget over a recursion of depth `tau_r`.
///
/// Counts run on levels `0..=tau_r` and split selections on levels
/// `0..tau_r`, each with a geometric per-level schedule summing to the
/// respective component. The count delta is split evenly across the
/// `tau_r + 1` count levels so the composed total equals the requested
/// `delta_cnt` exactly, and each level's offset `lambda_i` is derived from
/// that per-level delta.
pub fn compose_privacy(budget: &PrivacyBudget, tau_r: usize) -> Result<PrivacyReport> {
    budget.validate()?;
    if tau_r == 0 {
        return Err(Error::domain("tau_r must be at least 1"));
    }
    let levels_cnt = tau_r + 1;
    let cnt = budget_schedule(budget.eps_cnt, levels_cnt)?;
    let exp = budget_schedule(budget.eps_exp, tau_r)?;
    let delta_cnt_level = budget.delta_cnt / levels_cnt as f64;
    let lambdas: Vec<f64> = cnt
        .per_level
        .iter()
        .map(|&eps| count_offset(delta_cnt_level, eps))
        .collect::<Result<_>>()?;

    let eps_total = cnt.total() + exp.total() + budget.eps_avg + budget.eps_int;
    let delta_total = levels_cnt as f64 * delta_cnt_level + budget.delta_avg;

    Ok(PrivacyReport {
        eps_total,
        delta_total,
        per_level_eps_cnt: cnt.per_level,
        per_level_eps_exp: exp.per_level,
        per_level_lambda: lambdas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_budget_split_composes_to_one() {
        // eps components (0.04, 0.18, 0.18, 0.6) at tau_r = 7 give eps = 1
        let n = 100_000f64;
        let delta = 1.0 / (n * n.sqrt());
        let budget =
            PrivacyBudget::new(0.04, 0.18, 0.18, 0.6, 0.2 * delta, 0.8 * delta).unwrap();
        let report = compose_privacy(&budget, 7).unwrap();
        assert!((report.eps_total - 1.0).abs() < 1e-12);
        assert!((report.delta_total - delta).abs() / delta < 1e-12);
        assert_eq!(report.per_level_eps_cnt.len(), 8);
        assert_eq!(report.per_level_eps_exp.len(), 7);
        assert_eq!(report.per_level_lambda.len(), 8);
    }

    #[test]
    fn offsets_match_per_level_delta() {
        let budget = PrivacyBudget::new(0.1, 0.2, 0.3, 0.4, 0.01, 0.02).unwrap();
        let tau_r = 4;
        let report = compose_privacy(&budget, tau_r).unwrap();
        let delta_level = 0.01 / (tau_r + 1) as f64;
        for (lambda, eps) in report.per_level_lambda.iter().zip(&report.per_level_eps_cnt) {
            assert!((lambda - count_offset(delta_level, *eps).unwrap()).abs() < 1e-15);
        }
        // deeper levels get more budget, so their offsets shrink
        for w in report.per_level_lambda.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn rejects_invalid_budgets() {
        assert!(PrivacyBudget::new(0.0, 0.1, 0.1, 0.1, 0.1, 0.1).is_err());
        assert!(PrivacyBudget::new(0.1, -0.1, 0.1, 0.1, 0.1, 0.1).is_err());
        assert!(PrivacyBudget::new(0.1, 0.1, 0.1, 0.1, 0.0, 0.1).is_err());
        assert!(PrivacyBudget::new(0.1, 0.1, 0.1, 0.1, 1.5, 0.1).is_err());
        let ok = PrivacyBudget::new(0.1, 0.1, 0.1, 0.1, 0.1, 0.1).unwrap();
        assert!(compose_privacy(&ok, 0).is_err());
    }
}
