use super::roc::{macro_roc, RocCurve};
use super::{
    accuracy_paper, accuracy_standard, binary_counts, confusion, f_measure, precision, recall, BinaryCounts,
    ConfusionMatrix, EvalError,
};
use crate::bpnn::argmax;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub class: usize,
    pub counts: BinaryCounts,
    pub accuracy_paper: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// One-vs-rest AUC; `None` when the class is absent from the truth.
    pub auc: Option<f64>,
}

/// Macro-averaged metrics over the classes present in the truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy_paper: f64,
    pub accuracy_standard: f64,
    pub precision: f64,
    pub recall: f64,
    /// Harmonic mean of the macro precision and macro recall.
    pub f_measure: f64,
    pub auc: f64,
    pub per_class: Vec<ClassMetrics>,
    pub confusion: ConfusionMatrix,
    /// Macro one-vs-rest ROC on the FPR grid.
    pub roc: RocCurve,
    pub evaluated_classes: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Scores `probs[i]` (one probability per class) against `truth[i]`.
/// Predictions are the argmax, lowest class on ties.
pub fn evaluate(truth: &[usize], probs: &[Vec<f64>], classes: usize, grid_size: usize) -> Result<EvalReport, EvalError> {
    if truth.is_empty() {
        return Err(EvalError::Empty);
    }
    if truth.len() != probs.len() {
        return Err(EvalError::LengthMismatch(truth.len(), probs.len()));
    }
    let predicted: Vec<usize> = probs.iter().map(|p| argmax(p)).collect();
    let cm = confusion(truth, &predicted, classes)?;

    let present: Vec<usize> = (0..classes).filter(|&c| cm.row_total(c) > 0).collect();
    let mut warnings = Vec::new();
    if present.len() < classes {
        let absent: Vec<String> = (0..classes).filter(|c| !present.contains(c)).map(|c| c.to_string()).collect();
        warnings.push(format!(
            "classes {} absent from the evaluation labels; macro metrics use the {} present classes",
            absent.join(", "),
            present.len()
        ));
    }
    let roc = macro_roc(probs, truth, &present, grid_size)?;

    let per_class: Vec<ClassMetrics> = (0..classes)
        .map(|c| {
            let b = binary_counts(&cm, c);
            let (p, r) = (precision(&b), recall(&b));
            ClassMetrics {
                class: c,
                counts: b,
                accuracy_paper: accuracy_paper(&b),
                precision: p,
                recall: r,
                f_measure: f_measure(p, r),
                auc: present.iter().position(|&x| x == c).map(|i| roc.per_class_auc[i]),
            }
        })
        .collect();

    let mean = |f: fn(&ClassMetrics) -> f64| present.iter().map(|&c| f(&per_class[c])).sum::<f64>() / present.len() as f64;
    let (p, r) = (mean(|m| m.precision), mean(|m| m.recall));
    Ok(EvalReport {
        accuracy_paper: mean(|m| m.accuracy_paper),
        accuracy_standard: accuracy_standard(&cm),
        precision: p,
        recall: r,
        f_measure: f_measure(p, r),
        auc: roc.macro_auc,
        per_class,
        confusion: cm,
        roc: roc.curve,
        evaluated_classes: present,
        warnings,
    })
}

pub const TABLE_COLUMNS: [&str; 7] =
    ["Classifier", "Accuracy", "Precision", "Recall", "F-Measure", "AUC", "Std-Accuracy"];

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub classifier: String,
    /// Accuracy, Precision, Recall, F-Measure, AUC, Std-Accuracy.
    pub values: [f64; 6],
}

impl TableRow {
    pub fn from_report(classifier: &str, r: &EvalReport) -> Self {
        TableRow {
            classifier: classifier.to_string(),
            values: [r.accuracy_paper, r.precision, r.recall, r.f_measure, r.auc, r.accuracy_standard],
        }
    }
}

/// Aligned plain-text comparison table, four decimals per value.
pub fn format_table(rows: &[TableRow]) -> String {
    let name_w = rows.iter().map(|r| r.classifier.len()).chain([TABLE_COLUMNS[0].len()]).max().unwrap_or(10);
    let mut out = format!("{:<name_w$}", TABLE_COLUMNS[0]);
    for c in &TABLE_COLUMNS[1..] {
        out.push_str(&format!("  {c:>12}"));
    }
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{:<name_w$}", r.classifier));
        for v in r.values {
            out.push_str(&format!("  {v:>12.4}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or("empty table")?.split_whitespace().collect();
    if header != TABLE_COLUMNS {
        return Err(format!("unexpected header {header:?}"));
    }
    lines
        .map(|l| {
            let tok: Vec<&str> = l.split_whitespace().collect();
            if tok.len() != TABLE_COLUMNS.len() {
                return Err(format!("row has {} columns: {l}", tok.len()));
            }
            let mut values = [0.0; 6];
            for (v, t) in values.iter_mut().zip(&tok[1..]) {
                *v = t.parse().map_err(|e| format!("{t}: {e}"))?;
            }
            Ok(TableRow { classifier: tok[0].to_string(), values })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probs(rows: &[[f64; 3]]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn perfect_classifier() {
        let p = probs(&[[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8], [0.7, 0.2, 0.1]]);
        let r = evaluate(&[0, 1, 2, 0], &p, 3, 100).unwrap();
        for v in [r.accuracy_paper, r.accuracy_standard, r.precision, r.recall, r.f_measure, r.auc] {
            assert_eq!(v, 1.0);
        }
        assert!(r.warnings.is_empty());
        assert_eq!(r.roc.points.len(), 101);
    }

    #[test]
    fn absent_class_is_skipped_with_warning() {
        let p = probs(&[[0.8, 0.1, 0.1], [0.2, 0.7, 0.1], [0.6, 0.3, 0.1]]);
        let r = evaluate(&[0, 1, 1], &p, 3, 100).unwrap();
        assert_eq!(r.evaluated_classes, vec![0, 1]);
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.per_class[2].auc, None);
        // class 0: tp 1 fp 1; class 1: tp 1 fn 1
        assert_eq!(r.precision, (0.5 + 1.0) / 2.0);
        assert_eq!(r.recall, (1.0 + 0.5) / 2.0);
        assert!((r.accuracy_standard - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn table_round_trip() {
        let rows = vec![
            TableRow { classifier: "XGB".into(), values: [0.63, 0.31, 0.4, 0.35, 0.55, 0.7] },
            TableRow { classifier: "BPNN".into(), values: [0.43, 0.18, 0.26, 0.2127, 0.54, 0.5] },
        ];
        let text = format_table(&rows);
        assert!(text.starts_with("Classifier      Accuracy"));
        assert_eq!(parse_table(&text).unwrap(), rows);
        assert!(parse_table("nope\n").is_err());
    }
}
