use std::fs;
use std::path::PathBuf;

use log::{info, warn};
use rayon::prelude::*;

use crate::bpnn::{self, one_hot, TrainConfig};
use crate::eval::{evaluate, format_table, EvalReport, TableRow};
use crate::features::extract_all;
use crate::gbt::{self, GbtParams, TrainingMatrix};
use crate::midi::{extract_notes, parse_smf};

use super::{
    roc_svg, scan_dataset, stratified_split, write_feature_csv, read_feature_csv, write_roc_csv, DatasetManifest,
    FeatureRow, LabelIndex, ModelFile, NormalizationSpec, PipelineError, SplitSpec,
};

/// Features for every manifest entry, in manifest order. Files are parsed
/// in parallel.
pub fn extract_features(manifest: &DatasetManifest) -> Result<Vec<FeatureRow>, PipelineError> {
    manifest
        .entries
        .par_iter()
        .map(|(path, label)| {
            let bytes = fs::read(path).map_err(PipelineError::io(path))?;
            let notes = parse_smf(&bytes)
                .and_then(|doc| extract_notes(&doc))
                .map_err(|source| PipelineError::Midi { path: path.clone(), source })?;
            Ok(FeatureRow::from_vector(&extract_all(&notes, None), label))
        })
        .collect()
}

fn training_labels(rows: &[FeatureRow]) -> Result<(LabelIndex, Vec<usize>), PipelineError> {
    let labels = LabelIndex::from_rows(rows);
    match labels.len() {
        0 => return Err(PipelineError::InvalidArgument("training set is empty".into())),
        1 => return Err(PipelineError::SingleClass(labels.labels[0].clone())),
        _ => {}
    }
    let y = rows.iter().map(|r| labels.index(&r.label).expect("label drawn from rows")).collect();
    Ok((labels, y))
}

/// Fits the ensemble on raw features; `num_classes` is set from the data.
pub fn train_gbt(rows: &[FeatureRow], params: &GbtParams) -> Result<ModelFile, PipelineError> {
    let (labels, y) = training_labels(rows)?;
    let x: Vec<Vec<f64>> = rows.iter().map(|r| r.values.to_vec()).collect();
    let data = TrainingMatrix::new(&x, y)?;
    let params = GbtParams { num_classes: labels.len(), ..params.clone() };
    let outcome = gbt::train(&data, &params)?;
    if let Some(last) = outcome.train_loss.last() {
        info!("ensemble trained: {} rounds, final training loss {last:.6}", outcome.model.rounds());
    }
    Ok(ModelFile::Gbt { model: outcome.model, labels })
}

/// Fits the network on min-max scaled features with one-hot targets.
pub fn train_bpnn(rows: &[FeatureRow], config: &TrainConfig) -> Result<ModelFile, PipelineError> {
    let (labels, y) = training_labels(rows)?;
    let raw: Vec<_> = rows.iter().map(|r| r.values).collect();
    let norm = NormalizationSpec::fit(&raw);
    let x: Vec<Vec<f64>> = raw.iter().map(|r| norm.apply(r).to_vec()).collect();
    let t: Vec<Vec<f64>> = y.iter().map(|&c| one_hot(c, labels.len())).collect();
    let model = bpnn::fit(&x, &t, config)?;
    Ok(ModelFile::Bpnn { model, labels, norm })
}

pub fn evaluate_model(model: &ModelFile, rows: &[FeatureRow], grid_size: usize) -> Result<EvalReport, PipelineError> {
    let labels = model.labels();
    let truth = rows
        .iter()
        .map(|r| {
            labels
                .index(&r.label)
                .ok_or_else(|| PipelineError::InvalidArgument(format!("label `{}` is unknown to the model", r.label)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let probs: Vec<Vec<f64>> = rows.iter().map(|r| model.scores(&r.values)).collect();
    let report = evaluate(&truth, &probs, labels.len(), grid_size)?;
    for w in &report.warnings {
        warn!("{}: {w}", model.name());
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub data: PathBuf,
    pub out_dir: PathBuf,
    pub gbt: GbtParams,
    pub mlp: TrainConfig,
    pub split: SplitSpec,
    /// FPR grid intervals for the macro ROC curves.
    pub grid_size: usize,
}

#[derive(Debug, Clone)]
pub struct CompareOutcome {
    pub labels: LabelIndex,
    pub xgb: EvalReport,
    pub bpnn: EvalReport,
    pub train_size: usize,
    pub test_size: usize,
}

/// Output files written by [`run_compare`], relative to the output
/// directory.
pub const COMPARE_FILES: [&str; 9] = [
    "features.csv",
    "train.csv",
    "test.csv",
    "model_xgb.txt",
    "model_bpnn.txt",
    "comparison.txt",
    "roc_xgb.csv",
    "roc_bpnn.csv",
    "roc.svg",
];

/// Extract, split, train both classifiers and evaluate them on the held
/// out pieces. The feature CSV is re-read after writing and the re-read
/// rows drive everything downstream.
pub fn run_compare(config: &CompareConfig) -> Result<CompareOutcome, PipelineError> {
    let out = &config.out_dir;
    fs::create_dir_all(out).map_err(PipelineError::io(out))?;
    let write = |name: &str, text: &str| {
        let path = out.join(name);
        fs::write(&path, text).map_err(PipelineError::io(&path))
    };

    let manifest = scan_dataset(&config.data)?;
    info!("{} pieces, {} labels", manifest.entries.len(), manifest.labels.len());
    let features_path = out.join("features.csv");
    write_feature_csv(&features_path, &extract_features(&manifest)?)?;
    let rows = read_feature_csv(&features_path)?;

    let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
    let (train_idx, test_idx) = stratified_split(&labels, &config.split)?;
    let pick = |idx: &[usize]| idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>();
    let (train, test) = (pick(&train_idx), pick(&test_idx));
    write_feature_csv(&out.join("train.csv"), &train)?;
    write_feature_csv(&out.join("test.csv"), &test)?;

    let xgb_model = train_gbt(&train, &config.gbt)?;
    let bpnn_model = train_bpnn(&train, &config.mlp)?;
    if xgb_model.labels() != bpnn_model.labels() {
        return Err(PipelineError::Invariant("classifiers disagree on the label set".into()));
    }
    write("model_xgb.txt", &xgb_model.to_text())?;
    write("model_bpnn.txt", &bpnn_model.to_text())?;

    let xgb = evaluate_model(&xgb_model, &test, config.grid_size)?;
    let bpnn = evaluate_model(&bpnn_model, &test, config.grid_size)?;
    let table = format_table(&[TableRow::from_report(xgb_model.name(), &xgb), TableRow::from_report(bpnn_model.name(), &bpnn)]);
    write("comparison.txt", &table)?;
    write_roc_csv(&out.join("roc_xgb.csv"), &xgb.roc)?;
    write_roc_csv(&out.join("roc_bpnn.csv"), &bpnn.roc)?;
    write("roc.svg", &roc_svg(&[(xgb_model.name(), &xgb.roc), (bpnn_model.name(), &bpnn.roc)]))?;

    Ok(CompareOutcome {
        labels: xgb_model.labels().clone(),
        xgb,
        bpnn,
        train_size: train.len(),
        test_size: test.len(),
    })
}
