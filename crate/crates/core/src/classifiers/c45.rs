use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{ClassifierError, Dataset};

/// Gain ratios closer than this are treated as equal when choosing a split.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// Fewest training rows allowed on either side of a split.
    pub min_leaf: usize,
    pub prune: bool,
    /// Confidence factor of the pessimistic error estimate.
    pub confidence: f64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            min_leaf: 2,
            prune: true,
            confidence: 0.25,
        }
    }
}

impl TreeParams {
    /// Grow until leaves are pure, with no pruning.
    pub fn unpruned() -> Self {
        TreeParams {
            min_leaf: 1,
            prune: false,
            confidence: 0.25,
        }
    }
}

/// Tree node. Children are indices into the node arena; rows with
/// `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        counts: [usize; 2],
    },
    Split {
        feature: usize,
        threshold: f64,
        counts: [usize; 2],
        left: usize,
        right: usize,
    },
}

impl TreeNode {
    pub fn counts(&self) -> [usize; 2] {
        match self {
            TreeNode::Leaf { counts } | TreeNode::Split { counts, .. } => *counts,
        }
    }
}

/// Binary decision tree on continuous features, grown by gain ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    params: TreeParams,
    /// Root is node 0.
    nodes: Vec<TreeNode>,
}

/// A candidate split of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitChoice {
    pub feature: usize,
    pub threshold: f64,
    pub gain_ratio: f64,
}

fn entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

fn class_counts(labels: &[bool], rows: &[usize]) -> [usize; 2] {
    let infected = rows.iter().filter(|&&i| labels[i]).count();
    [rows.len() - infected, infected]
}

/// Best gain-ratio split of `rows` among the candidates whose information
/// gain is at least the average gain of all candidates. Ties go to the
/// lower threshold, then the lower feature index. Splits with zero gain are
/// allowed.
pub fn best_split(data: &Dataset, labels: &[bool], rows: &[usize], min_leaf: usize) -> Option<SplitChoice> {
    let n = rows.len();
    let parent = class_counts(labels, rows);
    let parent_entropy = entropy(&parent);
    let min_leaf = min_leaf.max(1);
    let total = n as f64;
    let mut candidates: Vec<(SplitChoice, f64)> = Vec::new();
    let mut column: Vec<(f64, bool)> = Vec::with_capacity(n);
    for feature in 0..data.width() {
        column.clear();
        column.extend(rows.iter().map(|&i| (data.value(i, feature), labels[i])));
        column.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut left = [0usize; 2];
        for p in 1..n {
            left[usize::from(column[p - 1].1)] += 1;
            let (a, b) = (column[p - 1].0, column[p].0);
            if a >= b || p < min_leaf || n - p < min_leaf {
                continue;
            }
            let right = [parent[0] - left[0], parent[1] - left[1]];
            let (nl, nr) = (p as f64, (n - p) as f64);
            let gain = (parent_entropy - nl / total * entropy(&left) - nr / total * entropy(&right)).max(0.0);
            let mut threshold = a + (b - a) / 2.0;
            if threshold >= b {
                threshold = a;
            }
            let choice = SplitChoice {
                feature,
                threshold,
                gain_ratio: gain / entropy(&[p, n - p]),
            };
            candidates.push((choice, gain));
        }
    }
    if candidates.is_empty() {
        return None;
    }
    let mean_gain = candidates.iter().map(|c| c.1).sum::<f64>() / candidates.len() as f64;
    let mut best: Option<SplitChoice> = None;
    for &(choice, gain) in &candidates {
        if gain < mean_gain - TIE_TOLERANCE {
            continue;
        }
        let better = match best {
            None => true,
            Some(cur) => {
                choice.gain_ratio > cur.gain_ratio + TIE_TOLERANCE
                    || ((choice.gain_ratio - cur.gain_ratio).abs() <= TIE_TOLERANCE && choice.threshold < cur.threshold)
            }
        };
        if better {
            best = Some(choice);
        }
    }
    best
}

/// Upper confidence bound on the extra errors of a leaf with `n` rows and
/// `e` training errors.
fn added_errors(n: f64, e: f64, confidence: f64) -> f64 {
    if e < 1.0 {
        let base = n * (1.0 - confidence.powf(1.0 / n));
        if e == 0.0 {
            return base;
        }
        return base + e * (added_errors(n, 1.0, confidence) - base);
    }
    if e + 0.5 >= n {
        return (n - e).max(0.0);
    }
    let z = Normal::standard().inverse_cdf(1.0 - confidence);
    let f = (e + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt()) / (1.0 + z * z / n);
    r * n - e
}

fn leaf_error_estimate(counts: [usize; 2], confidence: f64) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let e = counts[0].min(counts[1]) as f64;
    e + added_errors(n, e, confidence)
}

impl DecisionTree {
    pub fn fit(data: &Dataset, params: TreeParams) -> Result<Self, ClassifierError> {
        let labels = data.require_labels()?;
        if !(params.confidence > 0.0 && params.confidence <= 0.5) {
            return Err(ClassifierError::InvalidParameter(format!(
                "confidence {} outside (0, 0.5]",
                params.confidence
            )));
        }
        let mut nodes = vec![TreeNode::Leaf { counts: [0, 0] }];
        let mut stack = vec![(0usize, (0..data.len()).collect::<Vec<usize>>())];
        while let Some((id, rows)) = stack.pop() {
            let counts = class_counts(labels, &rows);
            nodes[id] = TreeNode::Leaf { counts };
            if counts[0] == 0 || counts[1] == 0 || rows.len() < 2 * params.min_leaf.max(1) {
                continue;
            }
            let Some(split) = best_split(data, labels, &rows, params.min_leaf) else {
                continue;
            };
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                .iter()
                .partition(|&&i| data.value(i, split.feature) <= split.threshold);
            let left = nodes.len();
            let right = left + 1;
            nodes.push(TreeNode::Leaf { counts: [0, 0] });
            nodes.push(TreeNode::Leaf { counts: [0, 0] });
            nodes[id] = TreeNode::Split {
                feature: split.feature,
                threshold: split.threshold,
                counts,
                left,
                right,
            };
            stack.push((right, right_rows));
            stack.push((left, left_rows));
        }
        let mut tree = DecisionTree { params, nodes };
        if params.prune {
            tree.prune();
        }
        Ok(tree)
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }

    pub fn depth(&self) -> usize {
        let mut deepest = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, d)) = stack.pop() {
            deepest = deepest.max(d);
            if let TreeNode::Split { left, right, .. } = self.nodes[id] {
                stack.push((left, d + 1));
                stack.push((right, d + 1));
            }
        }
        deepest
    }

    fn leaf_for(&self, row: &[f64]) -> [usize; 2] {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                TreeNode::Leaf { counts } => return *counts,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => id = if row[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    /// Laplace-smoothed class frequencies of the leaf reached by `row`.
    pub fn posteriors(&self, row: &[f64]) -> [f64; 2] {
        let counts = self.leaf_for(row);
        let n = (counts[0] + counts[1]) as f64;
        let p = (counts[1] as f64 + 1.0) / (n + 2.0);
        [1.0 - p, p]
    }

    /// Replace a subtree by a leaf when the leaf's pessimistic error is no
    /// worse than the subtree's (plus 0.1), then drop unreachable nodes.
    fn prune(&mut self) {
        let mut preorder = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            preorder.push(id);
            if let TreeNode::Split { left, right, .. } = self.nodes[id] {
                stack.push(right);
                stack.push(left);
            }
        }
        let cf = self.params.confidence;
        let mut estimate = vec![0.0; self.nodes.len()];
        for &id in preorder.iter().rev() {
            estimate[id] = match self.nodes[id] {
                TreeNode::Leaf { counts } => leaf_error_estimate(counts, cf),
                TreeNode::Split {
                    counts, left, right, ..
                } => {
                    let subtree = estimate[left] + estimate[right];
                    let as_leaf = leaf_error_estimate(counts, cf);
                    if as_leaf <= subtree + 0.1 {
                        self.nodes[id] = TreeNode::Leaf { counts };
                        as_leaf
                    } else {
                        subtree
                    }
                }
            };
        }
        self.compact();
    }

    fn compact(&mut self) {
        let mut old = std::mem::take(&mut self.nodes);
        let mut remap = vec![usize::MAX; old.len()];
        let mut order = Vec::new();
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            remap[id] = order.len();
            order.push(id);
            if let TreeNode::Split { left, right, .. } = old[id] {
                stack.push(right);
                stack.push(left);
            }
        }
        for &id in &order {
            if let TreeNode::Split { left, right, .. } = &mut old[id] {
                *left = remap[*left];
                *right = remap[*right];
            }
        }
        self.nodes = order.iter().map(|&id| old[id].clone()).collect();
    }
}
