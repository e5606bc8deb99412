//! Exact greedy split enumeration over pre-sorted feature columns.

use rayon::prelude::*;

use super::GbtError;

/// Dense sample × feature matrix. `NaN` marks a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingMatrix {
    n_features: usize,
    values: Vec<f64>,
    labels: Vec<usize>,
}

impl TrainingMatrix {
    pub fn new(rows: &[Vec<f64>], labels: Vec<usize>) -> Result<Self, GbtError> {
        let n_features = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n_features == 0 {
            return Err(GbtError::InvalidData("training matrix is empty".into()));
        }
        if rows.len() != labels.len() {
            return Err(GbtError::InvalidData(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n_features) {
            return Err(GbtError::InvalidData(format!("row {i} has {} features, expected {n_features}", rows[i].len())));
        }
        if rows.iter().flatten().any(|v| v.is_infinite()) {
            return Err(GbtError::InvalidData("infinite feature value".into()));
        }
        Ok(TrainingMatrix { n_features, values: rows.concat(), labels })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, i: usize, f: usize) -> f64 {
        self.values[i * self.n_features + f]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Rows `idx` in the given order.
    pub fn subset(&self, idx: &[usize]) -> TrainingMatrix {
        let mut values = Vec::with_capacity(idx.len() * self.n_features);
        for &i in idx {
            values.extend_from_slice(self.row(i));
        }
        TrainingMatrix {
            n_features: self.n_features,
            values,
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Column {
    /// Non-missing samples, ascending by value then index.
    sorted: Vec<usize>,
    /// Feature values aligned with `sorted`.
    values: Vec<f64>,
    /// Missing samples, ascending by index.
    missing: Vec<usize>,
}

/// Per-feature sample orderings, built once before training.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedFeatureBlocks {
    columns: Vec<Column>,
}

impl SortedFeatureBlocks {
    pub fn build(data: &TrainingMatrix) -> Self {
        let columns = (0..data.n_features())
            .map(|f| {
                let (mut sorted, missing): (Vec<usize>, Vec<usize>) =
                    (0..data.n_samples()).partition(|&i| !data.value(i, f).is_nan());
                sorted.sort_by(|&a, &b| data.value(a, f).total_cmp(&data.value(b, f)).then(a.cmp(&b)));
                let values = sorted.iter().map(|&i| data.value(i, f)).collect();
                Column { sorted, values, missing }
            })
            .collect();
        SortedFeatureBlocks { columns }
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn sorted(&self, f: usize) -> &[usize] {
        &self.columns[f].sorted
    }

    pub fn missing(&self, f: usize) -> &[usize] {
        &self.columns[f].missing
    }
}

/// Branch taken by a sample whose split feature is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

/// Regularization and stopping settings consulted during split search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitParams {
    pub lambda: f64,
    pub gamma: f64,
    pub min_child_hessian: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    /// Samples with `value < threshold` go left.
    pub threshold: f64,
    pub default_direction: Direction,
    pub gain: f64,
}

/// Optimal leaf weight `−G / (H + λ)`.
pub fn leaf_weight(grad_sum: f64, hess_sum: f64, lambda: f64) -> Result<f64, GbtError> {
    let denom = hess_sum + lambda;
    if denom == 0.0 {
        return Err(GbtError::DegenerateLeaf);
    }
    if grad_sum == 0.0 {
        return Ok(0.0);
    }
    Ok(-grad_sum / denom)
}

/// Structure-score reduction from replacing one leaf by two, minus the
/// extra leaf penalty `γ`.
pub fn split_gain(gl: f64, hl: f64, gr: f64, hr: f64, lambda: f64, gamma: f64) -> f64 {
    let g = gl + gr;
    let h = hl + hr;
    0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda)) - gamma
}

/// Midpoint threshold strictly above `lo` so that `lo` routes left.
pub fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    if mid <= lo {
        hi
    } else {
        mid
    }
}

impl SplitCandidate {
    /// Whether `self` should replace `best` under the ordering
    /// (gain desc, feature asc, threshold asc, Left before Right).
    fn beats(&self, best: &Option<SplitCandidate>) -> bool {
        match best {
            None => true,
            Some(b) => {
                if self.gain != b.gain {
                    return self.gain > b.gain;
                }
                self.feature
                    .cmp(&b.feature)
                    .then(self.threshold.total_cmp(&b.threshold))
                    .then((self.default_direction as u8).cmp(&(b.default_direction as u8)))
                    .is_lt()
            }
        }
    }
}

/// Best positive-gain split of the samples in `node`, or `None`.
///
/// Each feature's sorted block is scanned once, accumulating gradient and
/// hessian sums from the left. When the node has missing values in that
/// column both default directions are tried. Features are scanned in
/// parallel but reduced in index order, so the result is independent of
/// the worker count.
pub fn find_best_split(
    blocks: &SortedFeatureBlocks,
    node: &[usize],
    grad: &[f64],
    hess: &[f64],
    params: &SplitParams,
) -> Option<SplitCandidate> {
    if node.len() < 2 {
        return None;
    }
    let mut in_node = vec![false; grad.len()];
    for &i in node {
        in_node[i] = true;
    }

    let per_feature: Vec<Option<SplitCandidate>> = (0..blocks.n_features())
        .into_par_iter()
        .map(|f| best_for_feature(&blocks.columns[f], f, &in_node, grad, hess, params))
        .collect();

    per_feature.into_iter().flatten().fold(None, |best, c| if c.beats(&best) { Some(c) } else { best })
}

fn best_for_feature(
    col: &Column,
    feature: usize,
    in_node: &[bool],
    grad: &[f64],
    hess: &[f64],
    params: &SplitParams,
) -> Option<SplitCandidate> {
    let present: Vec<(usize, f64)> = col
        .sorted
        .iter()
        .zip(&col.values)
        .filter(|(&i, _)| in_node[i])
        .map(|(&i, &v)| (i, v))
        .collect();
    if present.len() < 2 {
        return None;
    }
    let (mut gm, mut hm) = (0.0, 0.0);
    let mut has_missing = false;
    for &i in col.missing.iter().filter(|&&i| in_node[i]) {
        gm += grad[i];
        hm += hess[i];
        has_missing = true;
    }
    let (mut gn, mut hn) = (0.0, 0.0);
    for &(i, _) in &present {
        gn += grad[i];
        hn += hess[i];
    }

    let SplitParams { lambda, gamma, min_child_hessian } = *params;
    let mut best: Option<SplitCandidate> = None;
    let mut consider = |gl: f64, hl: f64, gr: f64, hr: f64, threshold: f64, dir: Direction| {
        if hl < min_child_hessian || hr < min_child_hessian {
            return;
        }
        let gain = split_gain(gl, hl, gr, hr, lambda, gamma);
        let cand = SplitCandidate { feature, threshold, default_direction: dir, gain };
        if gain > 0.0 && cand.beats(&best) {
            best = Some(cand);
        }
    };

    let (mut gl, mut hl) = (0.0, 0.0);
    for w in present.windows(2) {
        let (i, lo) = w[0];
        let hi = w[1].1;
        gl += grad[i];
        hl += hess[i];
        if lo == hi {
            continue;
        }
        let threshold = midpoint(lo, hi);
        let (gr, hr) = (gn - gl, hn - hl);
        if has_missing {
            consider(gl + gm, hl + hm, gr, hr, threshold, Direction::Left);
            consider(gl, hl, gr + gm, hr + hm, threshold, Direction::Right);
        } else {
            consider(gl, hl, gr, hr, threshold, Direction::Left);
        }
    }
    best
}
