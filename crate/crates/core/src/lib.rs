//! Differentially private clustering through recursive separation.
//!
//! The library recursively splits a dataset through sparse regions found by
//! an Exponential-Mechanism selector over an emptiness/centreness score,
//! calibrates the split-interval size privately from neighbour-gap quantiles,
//! accounts the composed privacy guarantee, and ships the baselines and
//! metrics needed to evaluate the result (including the distance to a
//! non-private KMeans reference).

pub mod analysis;
pub mod baselines;
pub mod budget;
pub mod calibration;
pub mod dataset;
pub mod dpm;
pub mod error;
pub mod mech;
pub mod metrics;
pub mod result;
pub mod rng;
pub mod scoring;
pub mod tree;

pub use budget::{compose_privacy, PrivacyBudget, PrivacyReport};
pub use dataset::{load_dataset, write_dataset, Dataset, DatasetMeta, Interval};
pub use dpm::{fit, ClusteringResult, DpmParams};
pub use error::{Error, Result};
pub use rng::RandomSource;
