//! Second-order gradient boosting with regression trees.
//!
//! Each round fits one tree per output on the gradient/hessian of the loss
//! at the current scores. Leaves take the closed-form weight
//! `−G/(H+λ)` and splits are chosen by exact greedy enumeration of the
//! structure-score reduction over pre-sorted columns.

mod booster;
mod cv;
mod loss;
mod model_io;
mod split;
mod tree;

pub use booster::{objective_value, predict, train, train_objective, BoostedEnsemble, TrainOutcome};
pub use cv::{cross_validate, stratified_folds, CvResult};
pub use loss::{grad_hess, softmax, GradHess, Loss, Objective, Softmax, Squared};
pub use split::{
    find_best_split, leaf_weight, midpoint, split_gain, Direction, SortedFeatureBlocks, SplitCandidate, SplitParams,
    TrainingMatrix,
};
pub use tree::{build_tree, TreeNode};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GbtError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid training data: {0}")]
    InvalidData(String),
    #[error("leaf hessian sum plus lambda is zero")]
    DegenerateLeaf,
    #[error("class {class} has {count} samples, fewer than {folds} folds")]
    TooFewSamples { class: usize, count: usize, folds: usize },
    #[error("model file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GbtParams {
    pub rounds: usize,
    pub max_depth: usize,
    pub lambda: f64,
    pub gamma: f64,
    /// Shrinkage applied to every new tree.
    pub eta: f64,
    pub min_child_hessian: f64,
    pub num_classes: usize,
    /// Fold assignment seed for [`cross_validate`].
    pub seed: u64,
    /// Worker threads for split search; 0 uses the global rayon pool.
    pub workers: usize,
}

impl Default for GbtParams {
    fn default() -> Self {
        GbtParams {
            rounds: 100,
            max_depth: 3,
            lambda: 1.0,
            gamma: 0.0,
            eta: 0.3,
            min_child_hessian: 1.0,
            num_classes: 2,
            seed: 42,
            workers: 0,
        }
    }
}

impl GbtParams {
    pub fn validate(&self) -> Result<(), GbtError> {
        let bad = |msg: String| Err(GbtError::InvalidParams(msg));
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be finite and >= 0, got {}", self.lambda));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be finite and >= 0, got {}", self.gamma));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return bad(format!("eta must be in (0, 1], got {}", self.eta));
        }
        if !(self.min_child_hessian >= 0.0 && self.min_child_hessian.is_finite()) {
            return bad(format!("min_child_hessian must be finite and >= 0, got {}", self.min_child_hessian));
        }
        if self.num_classes < 2 {
            return bad(format!("num_classes must be >= 2, got {}", self.num_classes));
        }
        Ok(())
    }

    pub fn split_params(&self) -> SplitParams {
        SplitParams { lambda: self.lambda, gamma: self.gamma, min_child_hessian: self.min_child_hessian }
    }
}
