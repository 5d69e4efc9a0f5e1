//! Binary axis-parallel decision trees.
//!
//! An internal node tests `row[feature] <= threshold`; true goes left. Leaves
//! hold a full class distribution. Trees are values: every edit returns a new
//! tree.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Node {
    Leaf {
        distribution: Vec<f64>,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub fn leaf(distribution: Vec<f64>) -> Self {
        Node::Leaf { distribution }
    }

    pub fn split(feature: usize, threshold: f64, left: Node, right: Node) -> Self {
        Node::Split {
            feature,
            threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    pub fn node_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn route(&self, row: &[f64]) -> &[f64] {
        let mut node = self;
        loop {
            match node {
                Node::Leaf { distribution } => return distribution,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    fn max_feature(&self) -> Option<usize> {
        match self {
            Node::Leaf { .. } => None,
            Node::Split {
                feature, left, right, ..
            } => Some(
                [Some(*feature), left.max_feature(), right.max_feature()]
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(*feature),
            ),
        }
    }

    /// Node at preorder position `index`.
    pub(crate) fn at(&self, index: usize) -> Option<&Node> {
        let mut node = self;
        let mut offset = index;
        loop {
            if offset == 0 {
                return Some(node);
            }
            match node {
                Node::Leaf { .. } => return None,
                Node::Split { left, right, .. } => {
                    let left_size = left.node_count();
                    if offset <= left_size {
                        node = left;
                        offset -= 1;
                    } else {
                        node = right;
                        offset -= 1 + left_size;
                    }
                }
            }
        }
    }

    pub(crate) fn at_mut(&mut self, index: usize) -> Option<&mut Node> {
        let mut node = self;
        let mut offset = index;
        loop {
            if offset == 0 {
                return Some(node);
            }
            match node {
                Node::Leaf { .. } => return None,
                Node::Split { left, right, .. } => {
                    let left_size = left.node_count();
                    if offset <= left_size {
                        node = left;
                        offset -= 1;
                    } else {
                        node = right;
                        offset -= 1 + left_size;
                    }
                }
            }
        }
    }

    fn visit_preorder<F: FnMut(&Node)>(&self, f: &mut F) {
        f(self);
        if let Node::Split { left, right, .. } = self {
            left.visit_preorder(f);
            right.visit_preorder(f);
        }
    }

    fn check(&self, n_classes: usize) -> Result<()> {
        match self {
            Node::Leaf { distribution } => check_distribution(distribution, n_classes),
            Node::Split {
                threshold,
                left,
                right,
                ..
            } => {
                if !threshold.is_finite() {
                    return Err(Error::validation(format!("non-finite threshold {threshold}")));
                }
                left.check(n_classes)?;
                right.check(n_classes)
            }
        }
    }
}

pub(crate) fn check_distribution(distribution: &[f64], n_classes: usize) -> Result<()> {
    if distribution.len() != n_classes {
        return Err(Error::validation(format!(
            "distribution has {} entries, expected {n_classes}",
            distribution.len()
        )));
    }
    if distribution.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::validation("distribution has a negative or NaN entry"));
    }
    let sum: f64 = distribution.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::validation(format!("distribution sums to {sum}")));
    }
    Ok(())
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Preorder position of a node, tied to the tree revision it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeHandle {
    index: usize,
    revision: u64,
}

impl NodeHandle {
    pub fn index(&self) -> usize {
        self.index
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    n_classes: usize,
    root: Node,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDocument {
    format: u32,
    n_classes: usize,
    root: Node,
}

impl DecisionTree {
    pub fn new(root: Node, n_classes: usize) -> Result<Self> {
        if n_classes == 0 {
            return Err(Error::validation("tree needs at least one class"));
        }
        root.check(n_classes)?;
        Ok(DecisionTree { n_classes, root })
    }

    pub fn leaf(distribution: Vec<f64>) -> Result<Self> {
        let n = distribution.len();
        Self::new(Node::leaf(distribution), n)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn node_count(&self) -> usize {
        self.root.node_count()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Largest feature index tested anywhere in the tree.
    pub fn max_feature(&self) -> Option<usize> {
        self.root.max_feature()
    }

    /// Class distribution of the leaf reached by `row`. No length check.
    pub fn distribution(&self, row: &[f64]) -> &[f64] {
        self.root.route(row)
    }

    pub fn predict(&self, row: &[f64]) -> Result<usize> {
        if let Some(f) = self.max_feature() {
            if f >= row.len() {
                return Err(Error::validation(format!(
                    "row has {} values but the tree tests feature {f}",
                    row.len()
                )));
            }
        }
        Ok(argmax(self.root.route(row)))
    }

    /// Prediction without the row-length check; panics if a tested feature
    /// is out of range.
    pub fn predict_unchecked(&self, row: &[f64]) -> usize {
        argmax(self.root.route(row))
    }

    pub fn accuracy(&self, dataset: &Dataset, indices: &[usize]) -> Result<f64> {
        if indices.is_empty() {
            return Err(Error::validation("accuracy over an empty index list"));
        }
        if let Some(f) = self.max_feature() {
            if f >= dataset.n_features() {
                return Err(Error::validation(format!(
                    "tree tests feature {f} but the dataset has {}",
                    dataset.n_features()
                )));
            }
        }
        let correct = indices
            .iter()
            .filter(|&&i| self.predict_unchecked(&dataset.rows[i]) == dataset.labels[i])
            .count();
        Ok(correct as f64 / indices.len() as f64)
    }

    /// Structural digest used to detect stale handles.
    pub fn revision(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x0100_0000_01b3).rotate_left(17);
        };
        self.root.visit_preorder(&mut |n| match n {
            Node::Leaf { distribution } => {
                eat(u64::MAX);
                distribution.iter().for_each(|p| eat(p.to_bits()));
            }
            Node::Split {
                feature, threshold, ..
            } => {
                eat(*feature as u64);
                eat(threshold.to_bits());
            }
        });
        h
    }

    fn handles_where(&self, keep: impl Fn(&Node) -> bool) -> Vec<NodeHandle> {
        let revision = self.revision();
        let mut out = Vec::new();
        let mut index = 0;
        self.root.visit_preorder(&mut |n| {
            if keep(n) {
                out.push(NodeHandle { index, revision });
            }
            index += 1;
        });
        out
    }

    pub fn list_internal_nodes(&self) -> Vec<NodeHandle> {
        self.handles_where(|n| !n.is_leaf())
    }

    /// Every node, root included, in preorder.
    pub fn list_subtree_roots(&self) -> Vec<NodeHandle> {
        self.handles_where(|_| true)
    }

    fn resolve(&self, handle: NodeHandle) -> Result<usize> {
        if handle.revision != self.revision() {
            return Err(Error::validation("stale node handle"));
        }
        if handle.index >= self.node_count() {
            return Err(Error::validation(format!(
                "node handle {} out of range",
                handle.index
            )));
        }
        Ok(handle.index)
    }

    pub fn subtree_at(&self, handle: NodeHandle) -> Result<&Node> {
        let index = self.resolve(handle)?;
        Ok(self.root.at(index).expect("resolved index"))
    }

    pub fn replace_subtree(&self, handle: NodeHandle, subtree: Node) -> Result<DecisionTree> {
        let index = self.resolve(handle)?;
        subtree.check(self.n_classes)?;
        Ok(self.replaced_at(index, subtree))
    }

    pub(crate) fn replaced_at(&self, index: usize, subtree: Node) -> DecisionTree {
        let mut out = self.clone();
        *out.root.at_mut(index).expect("index in range") = subtree;
        out
    }

    /// New tree with the threshold of internal node `handle` set to `value`.
    pub fn with_threshold(&self, handle: NodeHandle, value: f64) -> Result<DecisionTree> {
        let index = self.resolve(handle)?;
        if !value.is_finite() {
            return Err(Error::validation("threshold must be finite"));
        }
        let mut out = self.clone();
        match out.root.at_mut(index) {
            Some(Node::Split { threshold, .. }) => {
                *threshold = value;
                Ok(out)
            }
            _ => Err(Error::validation("handle does not point at an internal node")),
        }
    }

    pub fn serialize(&self) -> String {
        let doc = TreeDocument {
            format: FORMAT_VERSION,
            n_classes: self.n_classes,
            root: self.root.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("tree serializes")
    }

    pub fn deserialize(text: &str) -> Result<DecisionTree> {
        let doc: TreeDocument = serde_json::from_str(text)?;
        if doc.format != FORMAT_VERSION {
            return Err(Error::validation(format!(
                "unsupported tree format {}",
                doc.format
            )));
        }
        DecisionTree::new(doc.root, doc.n_classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stump() -> DecisionTree {
        DecisionTree::new(
            Node::split(0, 5.0, Node::leaf(vec![1.0, 0.0]), Node::leaf(vec![0.0, 1.0])),
            2,
        )
        .unwrap()
    }

    #[test]
    fn bare_leaf_predicts_argmax() {
        let t = DecisionTree::leaf(vec![0.2, 0.8]).unwrap();
        assert_eq!(t.predict(&[123.0]).unwrap(), 1);
        assert_eq!(t.predict(&[]).unwrap(), 1);
        assert_eq!(t.node_count(), 1);
    }

    #[test]
    fn threshold_routing() {
        let t = stump();
        assert_eq!(t.predict(&[4.0]).unwrap(), 0);
        assert_eq!(t.predict(&[5.0]).unwrap(), 0);
        assert_eq!(t.predict(&[6.0]).unwrap(), 1);
        assert_eq!(t.node_count(), 3);
        assert!(t.predict(&[]).is_err());
    }

    #[test]
    fn tie_goes_to_lowest_class() {
        let t = DecisionTree::leaf(vec![0.5, 0.5]).unwrap();
        assert_eq!(t.predict(&[0.0]).unwrap(), 0);
        assert_eq!(argmax(&[0.1, 0.45, 0.45]), 1);
    }

    #[test]
    fn rejects_bad_distributions() {
        assert!(DecisionTree::leaf(vec![0.5, 0.6]).is_err());
        assert!(DecisionTree::leaf(vec![1.5, -0.5]).is_err());
        assert!(DecisionTree::new(Node::leaf(vec![1.0]), 2).is_err());
    }

    #[test]
    fn handles_and_replacement() {
        let t = stump();
        assert_eq!(t.list_internal_nodes().len(), 1);
        assert_eq!(t.list_subtree_roots().len(), 3);
        let leaf = DecisionTree::leaf(vec![1.0, 0.0]).unwrap();
        assert!(leaf.list_internal_nodes().is_empty());

        let root = t.list_subtree_roots()[0];
        let replaced = t.replace_subtree(root, Node::leaf(vec![0.3, 0.7])).unwrap();
        assert_eq!(replaced.node_count(), 1);
        assert_eq!(t.node_count(), 3);

        let right_leaf = t.list_subtree_roots()[2];
        let grown = t.replace_subtree(right_leaf, stump().into_root()).unwrap();
        assert_eq!(grown.node_count(), 5);

        // handle from the old revision is stale on the new tree
        assert!(grown.subtree_at(right_leaf).is_err());
        assert!(grown.replace_subtree(root, Node::leaf(vec![1.0, 0.0])).is_err());
    }

    #[test]
    fn serialize_round_trip() {
        let t = stump();
        let text = t.serialize();
        assert_eq!(DecisionTree::deserialize(&text).unwrap(), t);

        let leaf = DecisionTree::leaf(vec![0.25, 0.75]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&leaf.serialize()).unwrap();
        assert!(v.is_object());
        assert_eq!(v["format"], 1);
        assert_eq!(v["root"]["type"], "leaf");
    }

    #[test]
    fn tampered_threshold_is_parse_error() {
        let text = stump().serialize().replace("\"threshold\": 5.0", "\"threshold\": \"five\"");
        assert!(matches!(
            DecisionTree::deserialize(&text),
            Err(Error::Format(_))
        ));
        assert!(DecisionTree::deserialize("{not json").is_err());
    }
}
