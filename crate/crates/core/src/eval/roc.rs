use super::EvalError;

/// `(fpr, tpr)` points from `(0, 0)` to `(1, 1)`, non-decreasing in both.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<(f64, f64)>,
}

/// Threshold sweep over the distinct scores, highest first. Samples with
/// equal scores move together, producing one diagonal step.
pub fn roc_curve(scores: &[f64], positive: &[bool]) -> Result<RocCurve, EvalError> {
    if scores.len() != positive.len() {
        return Err(EvalError::LengthMismatch(positive.len(), scores.len()));
    }
    let pos = positive.iter().filter(|&&p| p).count();
    let neg = positive.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(EvalError::DegenerateLabels(format!("{pos} positives, {neg} negatives")));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if positive[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
    }
    if points.last() != Some(&(1.0, 1.0)) {
        points.push((1.0, 1.0));
    }
    Ok(RocCurve { points })
}

/// Trapezoidal area under the curve.
pub fn auc(curve: &RocCurve) -> f64 {
    curve.points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * 0.5).sum()
}

/// TPR of the curve at false-positive rate `x`: linear between points,
/// the highest TPR where the curve is vertical at `x`.
pub fn interpolate_tpr(curve: &RocCurve, x: f64) -> f64 {
    let pts = &curve.points;
    let j = pts.partition_point(|p| p.0 <= x).saturating_sub(1);
    let (x0, y0) = pts[j];
    if x0 == x || j + 1 == pts.len() {
        return y0;
    }
    let (x1, y1) = pts[j + 1];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MacroRoc {
    /// Pointwise mean TPR on `grid_size + 1` evenly spaced FPR values.
    pub curve: RocCurve,
    pub per_class_auc: Vec<f64>,
    /// Mean of the per-class AUCs.
    pub macro_auc: f64,
}

/// One-vs-rest ROC per class in `classes`, averaged on a common FPR grid.
/// `probs[i][c]` is sample `i`'s score for class `c`.
pub fn macro_roc(probs: &[Vec<f64>], labels: &[usize], classes: &[usize], grid_size: usize) -> Result<MacroRoc, EvalError> {
    if classes.len() < 2 {
        return Err(EvalError::DegenerateLabels(format!("{} classes", classes.len())));
    }
    let grid_size = grid_size.max(1);
    let mut curves = Vec::with_capacity(classes.len());
    for &c in classes {
        let scores: Vec<f64> = probs.iter().map(|p| p[c]).collect();
        let positive: Vec<bool> = labels.iter().map(|&y| y == c).collect();
        curves.push(roc_curve(&scores, &positive).map_err(|e| match e {
            EvalError::DegenerateLabels(m) => EvalError::DegenerateLabels(format!("class {c}: {m}")),
            other => other,
        })?);
    }
    let per_class_auc: Vec<f64> = curves.iter().map(auc).collect();
    let macro_auc = per_class_auc.iter().sum::<f64>() / per_class_auc.len() as f64;

    let k = curves.len() as f64;
    let points = (0..=grid_size)
        .map(|g| {
            let x = g as f64 / grid_size as f64;
            let tpr = match g {
                0 => 0.0,
                _ if g == grid_size => 1.0,
                _ => curves.iter().map(|c| interpolate_tpr(c, x)).sum::<f64>() / k,
            };
            (x, tpr)
        })
        .collect();
    Ok(MacroRoc { curve: RocCurve { points }, per_class_auc, macro_auc })
}
