use log::debug;

use super::loss::{softmax, Objective, Softmax};
use super::split::{SortedFeatureBlocks, TrainingMatrix};
use super::tree::{build_tree, TreeNode};
use super::{GbtError, GbtParams};

/// Additive tree model. `trees[m][c]` is round `m`'s tree for output `c`;
/// leaf weights are stored already multiplied by the shrinkage `eta`, and
/// every output starts from a base score of 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostedEnsemble {
    outputs: usize,
    eta: f64,
    trees: Vec<Vec<TreeNode>>,
}

impl BoostedEnsemble {
    pub fn new(outputs: usize, eta: f64) -> Self {
        BoostedEnsemble { outputs, eta, trees: Vec::new() }
    }

    /// Assembles a model from already-shrunk trees.
    pub fn from_trees(outputs: usize, eta: f64, trees: Vec<Vec<TreeNode>>) -> Result<Self, GbtError> {
        if let Some(m) = trees.iter().position(|r| r.len() != outputs) {
            return Err(GbtError::InvalidData(format!("round {m} has {} trees, expected {outputs}", trees[m].len())));
        }
        Ok(BoostedEnsemble { outputs, eta, trees })
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn rounds(&self) -> usize {
        self.trees.len()
    }

    pub fn trees(&self) -> &[Vec<TreeNode>] {
        &self.trees
    }

    pub fn leaf_count(&self) -> usize {
        self.trees.iter().flatten().map(TreeNode::leaf_count).sum()
    }

    pub fn push_round(&mut self, round: Vec<TreeNode>) {
        assert_eq!(round.len(), self.outputs);
        self.trees.push(round);
    }

    /// Raw per-output scores using only the first `rounds` rounds.
    pub fn scores_upto(&self, x: &[f64], rounds: usize) -> Vec<f64> {
        let mut s = vec![0.0; self.outputs];
        for round in &self.trees[..rounds.min(self.trees.len())] {
            for (sc, tree) in s.iter_mut().zip(round) {
                *sc += tree.predict(x);
            }
        }
        s
    }

    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        self.scores_upto(x, self.trees.len())
    }
}

/// Class probabilities: softmax over the summed tree outputs.
pub fn predict(model: &BoostedEnsemble, x: &[f64]) -> Vec<f64> {
    softmax(&model.scores(x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub model: BoostedEnsemble,
    /// Training loss, summed over samples, before the first round and after
    /// each round.
    pub train_loss: Vec<f64>,
}

/// Multiclass training with softmax cross-entropy.
pub fn train(data: &TrainingMatrix, params: &GbtParams) -> Result<TrainOutcome, GbtError> {
    params.validate()?;
    let k = params.num_classes;
    if data.n_samples() < 2 {
        return Err(GbtError::InvalidData("need at least 2 samples".into()));
    }
    if let Some(&bad) = data.labels().iter().find(|&&y| y >= k) {
        return Err(GbtError::InvalidData(format!("label {bad} outside 0..{k}")));
    }
    let mut present = vec![false; k];
    for &y in data.labels() {
        present[y] = true;
    }
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(GbtError::InvalidData("need at least 2 classes present".into()));
    }
    let targets: Vec<f64> = data.labels().iter().map(|&y| y as f64).collect();
    train_objective(data, &targets, &Softmax { classes: k }, params)
}

/// Training against any [`Objective`]; `targets` holds one value per sample.
pub fn train_objective(
    data: &TrainingMatrix,
    targets: &[f64],
    objective: &dyn Objective,
    params: &GbtParams,
) -> Result<TrainOutcome, GbtError> {
    params.validate()?;
    if targets.len() != data.n_samples() {
        return Err(GbtError::InvalidData(format!("{} targets for {} samples", targets.len(), data.n_samples())));
    }
    if params.workers == 0 {
        return boost(data, targets, objective, params);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.workers)
        .build()
        .map_err(|e| GbtError::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| boost(data, targets, objective, params))
}

fn boost(
    data: &TrainingMatrix,
    targets: &[f64],
    objective: &dyn Objective,
    params: &GbtParams,
) -> Result<TrainOutcome, GbtError> {
    let k = objective.outputs();
    let n = data.n_samples();
    let blocks = SortedFeatureBlocks::build(data);
    let split_params = params.split_params();

    let mut model = BoostedEnsemble::new(k, params.eta);
    let mut scores = vec![0.0; n * k];
    let mut train_loss = Vec::with_capacity(params.rounds + 1);
    train_loss.push(objective.loss(targets, &scores));

    for round in 0..params.rounds {
        let gh = objective.grad_hess(targets, &scores);
        let mut trees = Vec::with_capacity(k);
        for c in 0..k {
            let (g, h) = gh.column(c);
            let tree = build_tree(data, &blocks, &g, &h, params.max_depth, &split_params)?;
            trees.push(tree.scaled(params.eta));
        }
        for i in 0..n {
            let x = data.row(i);
            for (c, tree) in trees.iter().enumerate() {
                scores[i * k + c] += tree.predict(x);
            }
        }
        model.push_round(trees);
        let loss = objective.loss(targets, &scores);
        debug!("round {}: train loss {loss:.6}", round + 1);
        train_loss.push(loss);
    }
    Ok(TrainOutcome { model, train_loss })
}

/// Softmax training loss plus `γ·(leaf count) + ½λ·Σw²` over every stored
/// (shrunk) leaf weight.
pub fn objective_value(model: &BoostedEnsemble, data: &TrainingMatrix, lambda: f64, gamma: f64) -> f64 {
    let k = model.num_outputs();
    let mut scores = Vec::with_capacity(data.n_samples() * k);
    for i in 0..data.n_samples() {
        scores.extend(model.scores(data.row(i)));
    }
    let targets: Vec<f64> = data.labels().iter().map(|&y| y as f64).collect();
    let loss = Softmax { classes: k }.loss(&targets, &scores);
    let sq: f64 = model.trees().iter().flatten().flat_map(TreeNode::leaf_weights).map(|w| w * w).sum();
    loss + gamma * model.leaf_count() as f64 + 0.5 * lambda * sq
}
