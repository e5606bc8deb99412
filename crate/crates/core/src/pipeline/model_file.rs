//! Model files written by the CLI: the classifier's own text format
//! followed by a `labels` line (tab-separated class names) and, for the
//! network, `norm_min` / `norm_max` lines with the input scaling.

use crate::bpnn::{forward, MlpModel};
use crate::features::NUM_FEATURES;
use crate::gbt::{predict, BoostedEnsemble};
use crate::numfmt::sig;

use super::{LabelIndex, NormalizationSpec};

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum ModelFile {
    Gbt { model: BoostedEnsemble, labels: LabelIndex },
    Bpnn { model: MlpModel, labels: LabelIndex, norm: NormalizationSpec },
}

impl ModelFile {
    /// Classifier name used in report tables.
    pub fn name(&self) -> &'static str {
        match self {
            ModelFile::Gbt { .. } => "XGB",
            ModelFile::Bpnn { .. } => "BPNN",
        }
    }

    pub fn labels(&self) -> &LabelIndex {
        match self {
            ModelFile::Gbt { labels, .. } | ModelFile::Bpnn { labels, .. } => labels,
        }
    }

    /// Per-class scores for raw (unnormalized) features. Softmax
    /// probabilities for the ensemble, sigmoid outputs for the network.
    pub fn scores(&self, raw: &[f64; NUM_FEATURES]) -> Vec<f64> {
        match self {
            ModelFile::Gbt { model, .. } => predict(model, raw),
            ModelFile::Bpnn { model, norm, .. } => {
                forward(model, &norm.apply(raw)).expect("model input width checked at load").output
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = match self {
            ModelFile::Gbt { model, .. } => model.to_text(),
            ModelFile::Bpnn { model, .. } => model.to_text(),
        };
        out.push_str("labels");
        for l in &self.labels().labels {
            out.push('\t');
            out.push_str(l);
        }
        out.push('\n');
        if let ModelFile::Bpnn { norm, .. } = self {
            for (name, row) in [("norm_min", &norm.min), ("norm_max", &norm.max)] {
                out.push_str(name);
                for v in row {
                    out.push(' ');
                    out.push_str(&sig(*v, 17));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let first = text.split_whitespace().next().unwrap_or("");
        let file = match first {
            "gbtmodel" => {
                let model = BoostedEnsemble::read_lines(&mut lines).map_err(|e| e.to_string())?;
                let labels = read_labels(&mut lines)?;
                if labels.len() != model.num_outputs() {
                    return Err(format!("{} labels for a {}-class ensemble", labels.len(), model.num_outputs()));
                }
                ModelFile::Gbt { model, labels }
            }
            "mlpmodel" => {
                let model = MlpModel::read_lines(&mut lines).map_err(|e| e.to_string())?;
                if model.n1 != NUM_FEATURES {
                    return Err(format!("network expects {} inputs, features have {NUM_FEATURES}", model.n1));
                }
                let labels = read_labels(&mut lines)?;
                if labels.len() != model.n3 {
                    return Err(format!("{} labels for {} network outputs", labels.len(), model.n3));
                }
                let min = read_row(&mut lines, "norm_min")?;
                let max = read_row(&mut lines, "norm_max")?;
                ModelFile::Bpnn { model, labels, norm: NormalizationSpec { min, max } }
            }
            other => return Err(format!("unknown model type `{other}`")),
        };
        if let Some((line, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(format!("line {line}: unexpected trailing content"));
        }
        Ok(file)
    }
}

fn read_labels<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<LabelIndex, String> {
    let (line, text) = lines.next().ok_or("missing labels line")?;
    let mut parts = text.split('\t');
    if parts.next() != Some("labels") {
        return Err(format!("line {line}: expected labels line"));
    }
    let labels: Vec<String> = parts.map(str::to_string).collect();
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("line {line}: labels must be sorted and distinct"));
    }
    Ok(LabelIndex { labels })
}

fn read_row<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, name: &str) -> Result<[f64; NUM_FEATURES], String> {
    let (line, text) = lines.next().ok_or_else(|| format!("missing {name} line"))?;
    let mut tok = text.split_whitespace();
    if tok.next() != Some(name) {
        return Err(format!("line {line}: expected {name}"));
    }
    let vals: Vec<f64> = tok.map(str::parse).collect::<Result<_, _>>().map_err(|e| format!("line {line}: {e}"))?;
    vals.try_into().map_err(|v: Vec<f64>| format!("line {line}: {} values, expected {NUM_FEATURES}", v.len()))
}
