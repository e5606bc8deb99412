//! Seeded two-voice corpus generator. Each style fixes the distributions
//! that the eight features measure: melodic span, repetition rate,
//! accompaniment density, preferred vertical intervals, and duration
//! spread.

use std::fs;
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::midi::{write_smf, NoteEvent, NoteList, Voice};

use super::{scan_dataset, DatasetManifest, PipelineError};

const DIVISION: u16 = 480;
const JITTER_SPAN: u8 = 8;
const JITTER_PROB: f64 = 0.15;

#[derive(Debug, Clone, PartialEq)]
pub struct StyleParams {
    pub name: String,
    /// Lowest melody pitch.
    pub low: u8,
    /// Melody span in semitones.
    pub span: u8,
    pub repeat_prob: f64,
    /// Chance that a melody note gets an accompanying note below it.
    pub chord_prob: f64,
    /// Accompaniment intervals below the melody, with weights.
    pub intervals: Vec<(u8, f64)>,
    /// Note lengths in quarter notes, with weights.
    pub durations: Vec<(f64, f64)>,
    /// Melody length range in notes.
    pub notes: (usize, usize),
}

pub fn default_styles() -> Vec<StyleParams> {
    let style = |name: &str, low, span, repeat_prob, chord_prob, intervals: &[(u8, f64)], durations: &[(f64, f64)], notes| {
        StyleParams {
            name: name.to_string(),
            low,
            span,
            repeat_prob,
            chord_prob,
            intervals: intervals.to_vec(),
            durations: durations.to_vec(),
            notes,
        }
    };
    // Every style draws from the same interval and duration palettes;
    // only the weights differ.
    let iv = |w: [f64; 7]| -> Vec<(u8, f64)> { [3, 4, 5, 6, 7, 8, 12].into_iter().zip(w).collect() };
    let du = |w: [f64; 4]| -> Vec<(f64, f64)> { [0.25, 0.5, 1.0, 2.0].into_iter().zip(w).collect() };
    vec![
        style("aria", 60, 14, 0.10, 0.35, &iv([3.0, 3.0, 1.0, 0.5, 1.0, 2.0, 1.0]), &du([0.5, 1.0, 4.0, 1.0]), (40, 70)),
        style("chorale", 55, 18, 0.25, 0.65, &iv([2.0, 2.0, 1.0, 0.5, 3.0, 1.0, 2.0]), &du([0.2, 1.0, 3.0, 2.0]), (35, 60)),
        style("fugue", 50, 26, 0.12, 0.5, &iv([1.0, 1.0, 3.0, 0.5, 2.0, 1.0, 1.0]), &du([1.0, 3.0, 2.0, 0.5]), (50, 80)),
        style("nocturne", 50, 28, 0.18, 0.4, &iv([1.5, 1.0, 1.0, 2.0, 1.0, 1.5, 1.0]), &du([1.5, 1.0, 2.0, 1.5]), (40, 70)),
        style("toccata", 58, 22, 0.32, 0.55, &iv([1.0, 1.0, 2.0, 1.5, 1.0, 1.0, 1.0]), &du([3.0, 2.0, 1.0, 0.3]), (55, 85)),
    ]
}

/// One piece: a melody on channel 0 and a sparse lower voice on channel
/// 1 that shares the melody's onsets and lengths. The span, repetition
/// and chord rates are perturbed per piece so neighbouring styles overlap.
fn piece(style: &StyleParams, rng: &mut ChaCha8Rng) -> NoteList {
    let span = style.span.saturating_sub(JITTER_SPAN) + rng.gen_range(0..=2 * JITTER_SPAN);
    let repeat_prob = (style.repeat_prob + rng.gen_range(-JITTER_PROB..=JITTER_PROB)).clamp(0.0, 1.0);
    let chord_prob = (style.chord_prob + rng.gen_range(-JITTER_PROB..=JITTER_PROB)).clamp(0.0, 1.0);
    let durations = WeightedIndex::new(style.durations.iter().map(|d| d.1)).expect("positive weights");
    let intervals = WeightedIndex::new(style.intervals.iter().map(|i| i.1)).expect("positive weights");
    let n = rng.gen_range(style.notes.0..=style.notes.1);
    let (melody, bass) = (Voice::new(0, 0), Voice::new(0, 1));
    let mut notes = Vec::with_capacity(n * 2);
    let mut t = 0.0;
    let mut pitch = style.low + rng.gen_range(0..=span);
    for i in 0..n {
        if i > 0 && !rng.gen_bool(repeat_prob) {
            let step = loop {
                let s = rng.gen_range(-4i16..=4);
                if s != 0 {
                    break s;
                }
            };
            let p = (i16::from(pitch) + step).clamp(i16::from(style.low), i16::from(style.low + span));
            pitch = if p == i16::from(pitch) { (p - step).clamp(0, 127) as u8 } else { p as u8 };
        }
        let d = style.durations[durations.sample(rng)].0;
        notes.push(NoteEvent::new(pitch, t, d, melody));
        if rng.gen_bool(chord_prob) {
            let below = style.intervals[intervals.sample(rng)].0;
            notes.push(NoteEvent::new(pitch.saturating_sub(below), t, d, bass));
        }
        t += d;
    }
    NoteList::new(notes)
}

/// Writes `root/<style>/piece_NNNN.mid` for every style. Piece `i` of
/// style `s` draws from its own stream of a generator seeded with `seed`,
/// so the corpus is identical for a fixed seed regardless of order.
pub fn gen_synthetic(styles: &[StyleParams], pieces: usize, seed: u64, root: &Path) -> Result<DatasetManifest, PipelineError> {
    if styles.len() < 2 || pieces == 0 {
        return Err(PipelineError::InvalidArgument(format!("need >= 2 styles and >= 1 piece, got {} and {pieces}", styles.len())));
    }
    for (s, style) in styles.iter().enumerate() {
        let dir = root.join(&style.name);
        fs::create_dir_all(&dir).map_err(PipelineError::io(&dir))?;
        for i in 0..pieces {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((s as u64) << 32) | i as u64);
            let path = dir.join(format!("piece_{i:04}.mid"));
            fs::write(&path, write_smf(&piece(style, &mut rng), DIVISION)).map_err(PipelineError::io(&path))?;
        }
    }
    scan_dataset(root)
}
