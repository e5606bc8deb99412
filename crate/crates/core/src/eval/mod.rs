//! Classification metrics, ROC curves and AUC.
//!
//! Binary metrics use the one-vs-rest reduction of a confusion matrix.
//! Every ratio with a zero denominator evaluates to 0.

mod report;
mod roc;

pub use report::{evaluate, format_table, parse_table, ClassMetrics, EvalReport, TableRow};
pub use roc::{auc, interpolate_tpr, macro_roc, roc_curve, MacroRoc, RocCurve};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("label {label} outside 0..{classes}")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("{0} true labels but {1} predictions")]
    LengthMismatch(usize, usize),
    #[error("need both positive and negative samples: {0}")]
    DegenerateLabels(String),
    #[error("no samples to evaluate")]
    Empty,
}

/// `counts[t][p]`: samples of true class `t` predicted as `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes()).map(|c| self.counts[c][c]).sum()
    }

    pub fn row_total(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BinaryCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

pub fn confusion(truth: &[usize], predicted: &[usize], classes: usize) -> Result<ConfusionMatrix, EvalError> {
    if truth.len() != predicted.len() {
        return Err(EvalError::LengthMismatch(truth.len(), predicted.len()));
    }
    let mut counts = vec![vec![0; classes]; classes];
    for (&t, &p) in truth.iter().zip(predicted) {
        for label in [t, p] {
            if label >= classes {
                return Err(EvalError::LabelOutOfRange { label, classes });
            }
        }
        counts[t][p] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

pub fn binary_counts(cm: &ConfusionMatrix, c: usize) -> BinaryCounts {
    let tp = cm.counts[c][c];
    let col: u64 = cm.counts.iter().map(|r| r[c]).sum();
    let row = cm.row_total(c);
    let fp = col - tp;
    let fn_ = row - tp;
    BinaryCounts { tp, fp, fn_, tn: cm.total() - tp - fp - fn_ }
}

fn frac(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn precision(b: &BinaryCounts) -> f64 {
    frac(b.tp, b.tp + b.fp)
}

pub fn recall(b: &BinaryCounts) -> f64 {
    frac(b.tp, b.tp + b.fn_)
}

/// `tp / (tp + fp + fn)`: true negatives do not enter.
pub fn accuracy_paper(b: &BinaryCounts) -> f64 {
    frac(b.tp, b.tp + b.fp + b.fn_)
}

/// Fraction of samples on the diagonal.
pub fn accuracy_standard(cm: &ConfusionMatrix) -> f64 {
    frac(cm.trace(), cm.total())
}

/// Harmonic mean `2PR / (P + R)`.
pub fn f_measure(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}
