//! Twice-differentiable training losses.
//!
//! Scores are row-major `n × outputs`. Targets are one value per sample:
//! the class index for [`Softmax`], the regression target for [`Squared`].

/// First and second derivatives of the loss with respect to each score,
/// laid out like the scores.
#[derive(Debug, Clone, PartialEq)]
pub struct GradHess {
    pub outputs: usize,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

impl GradHess {
    /// Gradient and hessian columns for one output.
    pub fn column(&self, c: usize) -> (Vec<f64>, Vec<f64>) {
        let pick = |v: &[f64]| v.iter().skip(c).step_by(self.outputs).copied().collect();
        (pick(&self.g), pick(&self.h))
    }
}

/// A training loss usable by the booster. It only has to supply the total
/// loss and per-score derivatives.
pub trait Objective: Sync {
    fn outputs(&self) -> usize;
    fn loss(&self, targets: &[f64], scores: &[f64]) -> f64;
    fn grad_hess(&self, targets: &[f64], scores: &[f64]) -> GradHess;
}

/// Multiclass cross-entropy over softmax probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Softmax {
    pub classes: usize,
}

/// `½(ŷ − y)²` with a single output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Squared;

/// Softmax with max subtraction, written into `out`.
pub fn softmax_into(scores: &[f64], out: &mut [f64]) {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &s) in out.iter_mut().zip(scores) {
        *o = (s - max).exp();
        sum += *o;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; scores.len()];
    softmax_into(scores, &mut out);
    out
}

/// `−ln p_y` computed as `logsumexp(s) − s_y`.
fn cross_entropy(scores: &[f64], class: usize) -> f64 {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
    lse - scores[class]
}

impl Objective for Softmax {
    fn outputs(&self) -> usize {
        self.classes
    }

    fn loss(&self, targets: &[f64], scores: &[f64]) -> f64 {
        scores
            .chunks_exact(self.classes)
            .zip(targets)
            .map(|(row, &y)| cross_entropy(row, y as usize))
            .sum()
    }

    fn grad_hess(&self, targets: &[f64], scores: &[f64]) -> GradHess {
        let k = self.classes;
        let mut g = vec![0.0; scores.len()];
        let mut h = vec![0.0; scores.len()];
        for ((row, &y), (gr, hr)) in scores
            .chunks_exact(k)
            .zip(targets)
            .zip(g.chunks_exact_mut(k).zip(h.chunks_exact_mut(k)))
        {
            softmax_into(row, gr);
            for (c, (gc, hc)) in gr.iter_mut().zip(hr.iter_mut()).enumerate() {
                let p = *gc;
                *gc = if c == y as usize { p - 1.0 } else { p };
                *hc = p * (1.0 - p);
            }
        }
        GradHess { outputs: k, g, h }
    }
}

impl Objective for Squared {
    fn outputs(&self) -> usize {
        1
    }

    fn loss(&self, targets: &[f64], scores: &[f64]) -> f64 {
        scores.iter().zip(targets).map(|(s, y)| 0.5 * (s - y) * (s - y)).sum()
    }

    fn grad_hess(&self, targets: &[f64], scores: &[f64]) -> GradHess {
        GradHess {
            outputs: 1,
            g: scores.iter().zip(targets).map(|(s, y)| s - y).collect(),
            h: vec![1.0; scores.len()],
        }
    }
}

/// The built-in losses behind one name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    Softmax { classes: usize },
    Squared,
}

impl Objective for Loss {
    fn outputs(&self) -> usize {
        match *self {
            Loss::Softmax { classes } => Softmax { classes }.outputs(),
            Loss::Squared => Squared.outputs(),
        }
    }

    fn loss(&self, targets: &[f64], scores: &[f64]) -> f64 {
        match *self {
            Loss::Softmax { classes } => Softmax { classes }.loss(targets, scores),
            Loss::Squared => Squared.loss(targets, scores),
        }
    }

    fn grad_hess(&self, targets: &[f64], scores: &[f64]) -> GradHess {
        match *self {
            Loss::Softmax { classes } => Softmax { classes }.grad_hess(targets, scores),
            Loss::Squared => Squared.grad_hess(targets, scores),
        }
    }
}

pub fn grad_hess(loss: Loss, targets: &[f64], scores: &[f64]) -> GradHess {
    loss.grad_hess(targets, scores)
}
