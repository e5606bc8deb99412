use super::split::{find_best_split, leaf_weight, Direction, SortedFeatureBlocks, SplitParams, TrainingMatrix};
use super::GbtError;

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        weight: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        default_direction: Direction,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    /// Routes `x` to its leaf: left when `x[feature] < threshold`, the
    /// default direction when the value is missing (`NaN`).
    pub fn leaf_for(&self, x: &[f64]) -> &TreeNode {
        let mut node = self;
        while let TreeNode::Split { feature, threshold, default_direction, left, right } = node {
            node = if goes_left(x[*feature], *threshold, *default_direction) { left } else { right };
        }
        node
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        match self.leaf_for(x) {
            TreeNode::Leaf { weight } => *weight,
            TreeNode::Split { .. } => unreachable!("leaf_for stops at leaves"),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Leaf weights in pre-order.
    pub fn leaf_weights(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.visit_leaves(&mut |w| out.push(w));
        out
    }

    fn visit_leaves(&self, f: &mut impl FnMut(f64)) {
        match self {
            TreeNode::Leaf { weight } => f(*weight),
            TreeNode::Split { left, right, .. } => {
                left.visit_leaves(f);
                right.visit_leaves(f);
            }
        }
    }

    /// Multiplies every leaf weight by `factor`.
    pub fn scaled(&self, factor: f64) -> TreeNode {
        match self {
            TreeNode::Leaf { weight } => TreeNode::Leaf { weight: weight * factor },
            TreeNode::Split { feature, threshold, default_direction, left, right } => TreeNode::Split {
                feature: *feature,
                threshold: *threshold,
                default_direction: *default_direction,
                left: Box::new(left.scaled(factor)),
                right: Box::new(right.scaled(factor)),
            },
        }
    }
}

pub(crate) fn goes_left(value: f64, threshold: f64, default_direction: Direction) -> bool {
    if value.is_nan() {
        default_direction == Direction::Left
    } else {
        value < threshold
    }
}

/// Greedy depth-first construction: split while depth allows and a
/// positive-gain split exists; each leaf gets `−G/(H+λ)` over its samples.
pub fn build_tree(
    data: &TrainingMatrix,
    blocks: &SortedFeatureBlocks,
    grad: &[f64],
    hess: &[f64],
    max_depth: usize,
    params: &SplitParams,
) -> Result<TreeNode, GbtError> {
    let all: Vec<usize> = (0..data.n_samples()).collect();
    grow(data, blocks, &all, grad, hess, max_depth, params)
}

fn grow(
    data: &TrainingMatrix,
    blocks: &SortedFeatureBlocks,
    node: &[usize],
    grad: &[f64],
    hess: &[f64],
    depth_left: usize,
    params: &SplitParams,
) -> Result<TreeNode, GbtError> {
    let split = if depth_left > 0 { find_best_split(blocks, node, grad, hess, params) } else { None };
    let Some(split) = split else {
        let (g, h) = node.iter().fold((0.0, 0.0), |(g, h), &i| (g + grad[i], h + hess[i]));
        return Ok(TreeNode::Leaf { weight: leaf_weight(g, h, params.lambda)? });
    };
    let (left, right): (Vec<usize>, Vec<usize>) = node
        .iter()
        .partition(|&&i| goes_left(data.value(i, split.feature), split.threshold, split.default_direction));
    Ok(TreeNode::Split {
        feature: split.feature,
        threshold: split.threshold,
        default_direction: split.default_direction,
        left: Box::new(grow(data, blocks, &left, grad, hess, depth_left - 1, params)?),
        right: Box::new(grow(data, blocks, &right, grad, hess, depth_left - 1, params)?),
    })
}
