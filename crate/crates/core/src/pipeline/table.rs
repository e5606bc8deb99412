use std::fs;
use std::path::Path;

use crate::eval::RocCurve;
use crate::features::{FeatureVector, FEATURE_NAMES, NUM_FEATURES};
use crate::numfmt::sig;

use super::PipelineError;

/// One labelled piece in canonical feature order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub values: [f64; NUM_FEATURES],
    pub label: String,
}

impl FeatureRow {
    pub fn from_vector(v: &FeatureVector, label: &str) -> Self {
        FeatureRow { values: v.to_array(), label: label.to_string() }
    }
}

/// Sorted distinct labels; position is the class index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelIndex {
    pub labels: Vec<String>,
}

impl LabelIndex {
    pub fn from_rows(rows: &[FeatureRow]) -> Self {
        let mut labels: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();
        labels.sort();
        labels.dedup();
        LabelIndex { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> PipelineError + '_ {
    move |e| PipelineError::format(path, e.to_string())
}

fn ensure_parent(path: &Path) -> Result<(), PipelineError> {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => fs::create_dir_all(p).map_err(PipelineError::io(p)),
        _ => Ok(()),
    }
}

/// Values are written with 17 significant digits so a re-read reproduces
/// every bit.
pub fn write_feature_csv(path: &Path, rows: &[FeatureRow]) -> Result<(), PipelineError> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header: Vec<&str> = FEATURE_NAMES.to_vec();
    header.push("label");
    w.write_record(&header).map_err(csv_err(path))?;
    for r in rows {
        let mut rec: Vec<String> = r.values.iter().map(|&v| sig(v, 17)).collect();
        rec.push(r.label.clone());
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    w.flush().map_err(PipelineError::io(path))
}

pub fn read_feature_csv(path: &Path) -> Result<Vec<FeatureRow>, PipelineError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?;
    let expected = FEATURE_NAMES.iter().copied().chain(["label"]);
    if !header.iter().eq(expected) {
        return Err(PipelineError::format(path, format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let line = i + 2;
        let mut values = [0.0; NUM_FEATURES];
        for (j, v) in values.iter_mut().enumerate() {
            let field = &rec[j];
            *v = field
                .parse()
                .map_err(|e| PipelineError::format(path, format!("line {line}, {}: `{field}`: {e}", FEATURE_NAMES[j])))?;
        }
        rows.push(FeatureRow { values, label: rec[NUM_FEATURES].to_string() });
    }
    Ok(rows)
}

/// `fpr,tpr` rows with 9 significant digits.
pub fn write_roc_csv(path: &Path, curve: &RocCurve) -> Result<(), PipelineError> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(["fpr", "tpr"]).map_err(csv_err(path))?;
    for &(x, y) in &curve.points {
        w.write_record([sig(x, 9), sig(y, 9)]).map_err(csv_err(path))?;
    }
    w.flush().map_err(PipelineError::io(path))
}

pub fn read_roc_csv(path: &Path) -> Result<RocCurve, PipelineError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    if !r.headers().map_err(csv_err(path))?.iter().eq(["fpr", "tpr"]) {
        return Err(PipelineError::format(path, "expected `fpr,tpr` header"));
    }
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        let num = |s: &str| s.parse::<f64>().map_err(|e| PipelineError::format(path, format!("`{s}`: {e}")));
        points.push((num(&rec[0])?, num(&rec[1])?));
    }
    Ok(RocCurve { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_csv_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("f.csv");
        let rows = vec![
            FeatureRow { values: [12.0, 0.1, 1.0 / 3.0, 0.0, 2e-300, 0.7, 123.456, 5.0], label: "bach".into() },
            FeatureRow { values: [0.0; NUM_FEATURES], label: "has,comma".into() },
        ];
        write_feature_csv(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(
            "range,repeated_notes,vertical_perfect_fourths,rhythmic_variability,parallel_motion,vertical_tritones,chord_duration,number_of_pitches,label\n"
        ));
        assert_eq!(read_feature_csv(&path).unwrap(), rows);
    }

    #[test]
    fn rejects_bad_header_and_values() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("f.csv");
        fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(read_feature_csv(&path).is_err());
        let mut text = FEATURE_NAMES.join(",");
        text.push_str(",label\n1,2,3,4,5,6,x,8,l\n");
        fs::write(&path, text).unwrap();
        assert!(read_feature_csv(&path).is_err());
    }

    #[test]
    fn roc_csv_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("r.csv");
        let c = RocCurve { points: vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)] };
        write_roc_csv(&path, &c).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "fpr,tpr\n0,0\n0.5,0.25\n1,1\n");
        assert_eq!(read_roc_csv(&path).unwrap(), c);
    }

    #[test]
    fn label_index() {
        let row = |l: &str| FeatureRow { values: [0.0; NUM_FEATURES], label: l.into() };
        let idx = LabelIndex::from_rows(&[row("b"), row("a"), row("b")]);
        assert_eq!(idx.labels, vec!["a", "b"]);
        assert_eq!(idx.index("b"), Some(1));
        assert_eq!(idx.index("c"), None);
    }
}
