//! End-to-end orchestration: dataset scanning, stratified splitting,
//! feature caching, normalization, the synthetic corpus, and the
//! two-classifier comparison.

mod compare;
mod dataset;
mod model_file;
mod normalize;
mod plot;
mod synth;
mod table;

pub use compare::{
    evaluate_model, extract_features, run_compare, train_bpnn, train_gbt, CompareConfig, CompareOutcome, COMPARE_FILES,
};
pub use dataset::{scan_dataset, stratified_split, DatasetManifest, SplitSpec};
pub use model_file::ModelFile;
pub use normalize::NormalizationSpec;
pub use plot::roc_svg;
pub use synth::{default_styles, gen_synthetic, StyleParams};
pub use table::{read_feature_csv, read_roc_csv, write_feature_csv, write_roc_csv, FeatureRow, LabelIndex};

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::bpnn::MlpError;
use crate::eval::EvalError;
use crate::gbt::GbtError;
use crate::midi::MidiError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Midi { path: PathBuf, source: MidiError },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("no .mid or .midi files under {0}")]
    EmptyDataset(PathBuf),
    #[error("only one label ({0}) found; at least two are needed")]
    SingleClass(String),
    #[error("label {label} has {count} samples; at least 2 are needed to split")]
    TooFewSamples { label: String, count: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Gbt(#[from] GbtError),
    #[error(transparent)]
    Mlp(#[from] MlpError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl PipelineError {
    /// Process exit status for the CLI: 2 for bad input data, 3 for a
    /// violated internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Invariant(_) | PipelineError::Gbt(GbtError::DegenerateLeaf) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: &Path) -> impl FnOnce(io::Error) -> PipelineError + '_ {
        move |source| PipelineError::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn format(path: &Path, msg: impl Into<String>) -> PipelineError {
        PipelineError::Format { path: path.to_path_buf(), msg: msg.into() }
    }
}
