use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::booster::train;
use super::loss::{Objective, Softmax};
use super::split::TrainingMatrix;
use super::{GbtError, GbtParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    /// Fold assignment per sample.
    pub folds: Vec<usize>,
    /// `fold_losses[f][r]`: mean validation log loss of fold `f` after
    /// round `r + 1`.
    pub fold_losses: Vec<Vec<f64>>,
    /// Mean over folds, per round.
    pub mean_loss: Vec<f64>,
    /// 1-based round with the lowest mean validation loss (earliest on ties).
    pub best_round: usize,
}

/// Seeded stratified assignment: each class's members are shuffled and dealt
/// round-robin over `k` folds.
pub fn stratified_folds(labels: &[usize], k: usize, seed: u64) -> Result<Vec<usize>, GbtError> {
    let classes = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); classes];
    for (i, &y) in labels.iter().enumerate() {
        members[y].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; labels.len()];
    for (class, idx) in members.iter_mut().enumerate() {
        if idx.is_empty() {
            continue;
        }
        if idx.len() < k {
            return Err(GbtError::TooFewSamples { class, count: idx.len(), folds: k });
        }
        idx.shuffle(&mut rng);
        for (pos, &i) in idx.iter().enumerate() {
            folds[i] = pos % k;
        }
    }
    Ok(folds)
}

/// k-fold cross validation tracking the validation loss after every round.
pub fn cross_validate(data: &TrainingMatrix, params: &GbtParams, k: usize) -> Result<CvResult, GbtError> {
    params.validate()?;
    if k < 2 {
        return Err(GbtError::InvalidParams(format!("need at least 2 folds, got {k}")));
    }
    if params.rounds == 0 {
        return Err(GbtError::InvalidParams("cross validation needs at least 1 round".into()));
    }
    if data.n_samples() < k {
        return Err(GbtError::InvalidData(format!("{} samples for {k} folds", data.n_samples())));
    }
    let folds = stratified_folds(data.labels(), k, params.seed)?;
    let objective = Softmax { classes: params.num_classes };

    let mut fold_losses = Vec::with_capacity(k);
    for f in 0..k {
        let (train_idx, valid_idx): (Vec<usize>, Vec<usize>) = (0..data.n_samples()).partition(|&i| folds[i] != f);
        let model = train(&data.subset(&train_idx), params)?.model;

        let kk = params.num_classes;
        let targets: Vec<f64> = valid_idx.iter().map(|&i| data.labels()[i] as f64).collect();
        let mut scores = vec![0.0; valid_idx.len() * kk];
        let mut curve = Vec::with_capacity(params.rounds);
        for round in model.trees() {
            for (v, &i) in valid_idx.iter().enumerate() {
                let x = data.row(i);
                for (c, tree) in round.iter().enumerate() {
                    scores[v * kk + c] += tree.predict(x);
                }
            }
            curve.push(objective.loss(&targets, &scores) / valid_idx.len() as f64);
        }
        fold_losses.push(curve);
    }

    let mean_loss: Vec<f64> =
        (0..params.rounds).map(|r| fold_losses.iter().map(|c| c[r]).sum::<f64>() / k as f64).collect();
    let best = mean_loss
        .iter()
        .enumerate()
        .fold(0, |best, (r, &l)| if l < mean_loss[best] { r } else { best });
    Ok(CvResult { folds, fold_losses, mean_loss, best_round: best + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicated_samples_give_identical_folds() {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![if i < 4 { 1.0 } else { 5.0 }, 2.0]).collect();
        let labels = (0..8).map(|i| usize::from(i >= 4)).collect();
        let data = TrainingMatrix::new(&rows, labels).unwrap();
        let params = GbtParams { rounds: 5, min_child_hessian: 0.0, ..GbtParams::default() };
        let cv = cross_validate(&data, &params, 2).unwrap();
        assert_eq!(cv.fold_losses[0], cv.fold_losses[1]);
        for c in 0..2 {
            for f in 0..2 {
                let n = (0..8).filter(|&i| data.labels()[i] == c && cv.folds[i] == f).count();
                assert_eq!(n, 2);
            }
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i * 7 % 11) as f64, (i % 4) as f64]).collect();
        let labels: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let data = TrainingMatrix::new(&rows, labels).unwrap();
        let params = GbtParams { rounds: 8, num_classes: 3, seed: 9, ..GbtParams::default() };
        assert_eq!(cross_validate(&data, &params, 3).unwrap(), cross_validate(&data, &params, 3).unwrap());
    }

    #[test]
    fn too_few_members() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64]).collect();
        let data = TrainingMatrix::new(&rows, vec![0, 0, 0, 1, 1]).unwrap();
        let r = cross_validate(&data, &GbtParams { rounds: 2, ..GbtParams::default() }, 3);
        assert_eq!(r, Err(GbtError::TooFewSamples { class: 1, count: 2, folds: 3 }));
    }
}
