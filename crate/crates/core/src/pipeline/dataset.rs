use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::PipelineError;

/// Pieces found under `root/<label>/`, ordered by label then path.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<(PathBuf, String)>,
    /// Sorted; a label's position is its class index.
    pub labels: Vec<String>,
    pub counts: Vec<usize>,
}

impl DatasetManifest {
    pub fn class_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }
}

fn is_midi(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("mid") || e.eq_ignore_ascii_case("midi"))
}

pub fn scan_dataset(root: &Path) -> Result<DatasetManifest, PipelineError> {
    let mut by_label: BTreeMap<String, Vec<PathBuf>> = BTreeMap::new();
    for dir in fs::read_dir(root).map_err(PipelineError::io(root))? {
        let dir = dir.map_err(PipelineError::io(root))?.path();
        if !dir.is_dir() {
            continue;
        }
        let Some(label) = dir.file_name().and_then(|n| n.to_str()).map(str::to_string) else {
            continue;
        };
        for file in fs::read_dir(&dir).map_err(PipelineError::io(&dir))? {
            let file = file.map_err(PipelineError::io(&dir))?.path();
            if file.is_file() && is_midi(&file) {
                by_label.entry(label.clone()).or_default().push(file);
            }
        }
    }
    if by_label.is_empty() {
        return Err(PipelineError::EmptyDataset(root.to_path_buf()));
    }
    if by_label.len() == 1 {
        return Err(PipelineError::SingleClass(by_label.into_keys().next().unwrap_or_default()));
    }
    let mut manifest = DatasetManifest { entries: Vec::new(), labels: Vec::new(), counts: Vec::new() };
    for (label, mut files) in by_label {
        files.sort();
        manifest.counts.push(files.len());
        manifest.entries.extend(files.into_iter().map(|f| (f, label.clone())));
        manifest.labels.push(label);
    }
    Ok(manifest)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { train_fraction: 0.9, seed: 42 }
    }
}

/// Per-label seeded shuffle; the first `floor(fraction * n)` members of
/// each label go to training. Returns ascending `(train, test)` indices.
pub fn stratified_split<S: AsRef<str>>(labels: &[S], spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>), PipelineError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(PipelineError::InvalidArgument(format!(
            "train fraction must be in (0, 1), got {}",
            spec.train_fraction
        )));
    }
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        groups.entry(l.as_ref()).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (label, mut members) in groups {
        if members.len() < 2 {
            return Err(PipelineError::TooFewSamples { label: label.to_string(), count: members.len() });
        }
        members.shuffle(&mut rng);
        // The epsilon keeps products like 0.29 * 100 from flooring to 28.
        let k = (spec.train_fraction * members.len() as f64 + 1e-9).floor() as usize;
        train.extend_from_slice(&members[..k]);
        test.extend_from_slice(&members[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}
