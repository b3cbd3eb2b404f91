//! Fit configuration: defaults, TOML config files, flag overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};

use dpm_core::{Error, PrivacyBudget, Result};

/// Every tunable of a clustering run. Defaults follow the standard
/// evaluation protocol: depth 7, `t = 0.3`, `q = 1/12`, `alpha = 5`,
/// budget split 0.04/0.18/0.18/0.6, delta split 0.2/0.8, sigmas `[30]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub eps: f64,
    /// Total delta; `None` resolves to `1/(n * sqrt(n))` for the dataset.
    pub delta: Option<f64>,
    /// Fractions of `eps` for interval estimation, counts, selection,
    /// averaging. Must sum to 1.
    pub eps_split: [f64; 4],
    /// Fractions of `delta` for counts and averaging. Must sum to 1.
    pub delta_split: [f64; 2],
    pub tau_r: usize,
    pub tau_e: Option<f64>,
    pub t: f64,
    pub q: f64,
    pub alpha: f64,
    pub sigmas: Vec<f64>,
    /// Skips calibration when set; its budget is then reported unspent.
    pub beta: Option<f64>,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            eps: 1.0,
            delta: None,
            eps_split: [0.04, 0.18, 0.18, 0.6],
            delta_split: [0.2, 0.8],
            tau_r: 7,
            tau_e: None,
            t: 0.3,
            q: 1.0 / 12.0,
            alpha: 5.0,
            sigmas: vec![30.0],
            beta: None,
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("bad config file: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        if let Some(delta) = self.delta {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(Error::Config(format!("delta must lie in (0, 1), got {delta}")));
            }
        }
        for (name, split, len) in [
            ("eps_split", &self.eps_split[..], 4),
            ("delta_split", &self.delta_split[..], 2),
        ] {
            let _ = len;
            if split.iter().any(|&f| f <= 0.0) {
                return Err(Error::Config(format!("{name} fractions must be positive")));
            }
            let sum: f64 = split.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!("{name} must sum to 1, got {sum}")));
            }
        }
        Ok(())
    }

    /// Resolve the total delta: explicit, or `1/(n * sqrt(n))`.
    pub fn resolved_delta(&self, n: usize) -> Result<f64> {
        match self.delta {
            Some(d) => Ok(d),
            None => {
                if n == 0 {
                    return Err(Error::Config(
                        "delta must be given explicitly for an empty dataset".into(),
                    ));
                }
                Ok(1.0 / (n as f64 * (n as f64).sqrt()))
            }
        }
    }

    pub fn budget(&self, delta: f64) -> Result<PrivacyBudget> {
        PrivacyBudget::new(
            self.eps * self.eps_split[0],
            self.eps * self.eps_split[1],
            self.eps * self.eps_split[2],
            self.eps * self.eps_split[3],
            delta * self.delta_split[0],
            delta * self.delta_split[1],
        )
    }
}

/// The configuration echoed into a result document, with runtime-resolved
/// values filled in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub data: String,
    #[serde(flatten)]
    pub config: FitConfig,
    pub resolved_delta: f64,
    pub resolved_beta: f64,
    pub resolved_tau_e: f64,
}
