//! The structured result document written after a clustering run.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::budget::PrivacyReport;
use crate::error::Result;
use crate::tree::SplitTreeNode;

/// Everything a run produces: noisy centres and weights, the applied split
/// tree, the privacy report, the seed, and an echo of the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub centres: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub split_tree: SplitTreeNode,
    pub privacy_report: PrivacyReport,
    pub seed: u64,
    pub config_echo: serde_json::Value,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Serialize a result document to its canonical byte form.
///
/// Floats are printed in shortest round-trip notation and struct fields in
/// declaration order, so identical documents serialize to identical bytes.
pub fn result_to_bytes(doc: &ResultDocument) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_result(path: &Path, doc: &ResultDocument) -> Result<()> {
    fs::write(path, result_to_bytes(doc)?)?;
    Ok(())
}

pub fn read_result(path: &Path) -> Result<ResultDocument> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::LeafInfo;

    fn sample_doc() -> ResultDocument {
        ResultDocument {
            centres: vec![vec![0.1, 0.2], vec![0.9, 0.75]],
            weights: vec![501.25, 498.5],
            split_tree: SplitTreeNode {
                level: 0,
                decision: None,
                children: None,
                leaf: Some(LeafInfo { centre: vec![0.1, 0.2], weight: 501.25 }),
            },
            privacy_report: PrivacyReport {
                eps_total: 1.0,
                delta_total: 1e-6,
                per_level_eps_cnt: vec![0.05, 0.13],
                per_level_eps_exp: vec![0.18],
                per_level_lambda: vec![200.0, 80.0],
            },
            seed: 42,
            config_echo: serde_json::json!({"tau_r": 7, "t": 0.3}),
            warnings: vec![],
        }
    }

    #[test]
    fn write_read_write_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("result.json");
        let doc = sample_doc();
        write_result(&path, &doc).unwrap();
        let original = fs::read(&path).unwrap();
        let reread = read_result(&path).unwrap();
        assert_eq!(reread, doc);
        let rewritten = result_to_bytes(&reread).unwrap();
        assert_eq!(original, rewritten);
    }

    #[test]
    fn awkward_floats_survive_the_round_trip() {
        let mut doc = sample_doc();
        doc.weights = vec![0.1 + 0.2, 1e-300, 12345678901234.567, -0.0];
        let bytes = result_to_bytes(&doc).unwrap();
        let back: ResultDocument = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(result_to_bytes(&back).unwrap(), bytes);
    }
}
