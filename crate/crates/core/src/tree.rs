//! The applied split tree and its serialized form.

use serde::{Deserialize, Serialize};

/// A split selected at one node of the recursion.
///
/// `applied` is false only at halting nodes, where a split was drawn but
/// discarded because a child fell below the minimum noisy size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDecision {
    pub dimension: usize,
    pub position: f64,
    pub level: usize,
    pub applied: bool,
    pub chosen_flat_index: usize,
}

/// Payload of a leaf: its privacy-preserving centre and noisy size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafInfo {
    pub centre: Vec<f64>,
    pub weight: f64,
}

/// One node of the split tree. Internal nodes carry an applied decision and
/// two children; leaves carry a [`LeafInfo`] and, when the recursion halted
/// on a rejected split, that unapplied decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitTreeNode {
    pub level: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decision: Option<SplitDecision>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub children: Option<Vec<SplitTreeNode>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf: Option<LeafInfo>,
}

impl SplitTreeNode {
    pub fn is_leaf(&self) -> bool {
        self.leaf.is_some()
    }

    pub fn leaf_count(&self) -> usize {
        match &self.children {
            None => 1,
            Some(kids) => kids.iter().map(|k| k.leaf_count()).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match &self.children {
            None => self.level,
            Some(kids) => kids.iter().map(|k| k.depth()).max().unwrap_or(self.level),
        }
    }

    /// Leaves in deterministic left-to-right order.
    pub fn leaves(&self) -> Vec<&SplitTreeNode> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a SplitTreeNode>) {
        match &self.children {
            None => out.push(self),
            Some(kids) => {
                for k in kids {
                    k.collect_leaves(out);
                }
            }
        }
    }
}
