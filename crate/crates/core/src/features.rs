//! The eight per-piece descriptors used as classifier input.
//!
//! Every function takes a non-empty [`NoteList`]; ingestion rejects files
//! without pitched notes, so the empty case never reaches this module.
//! "Vertical" features sample the texture at note-onset instants only.

use std::collections::BTreeMap;

use crate::midi::{NoteEvent, NoteList, Voice};

pub const NUM_FEATURES: usize = 8;

/// Canonical feature order, shared by CSV columns and model inputs.
pub const FEATURE_NAMES: [&str; NUM_FEATURES] = [
    "range",
    "repeated_notes",
    "vertical_perfect_fourths",
    "rhythmic_variability",
    "parallel_motion",
    "vertical_tritones",
    "chord_duration",
    "number_of_pitches",
];

const PERFECT_FOURTH: u8 = 5;
const TRITONE: u8 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub range: u32,
    pub repeated_notes: f64,
    pub vertical_perfect_fourths: f64,
    pub rhythmic_variability: f64,
    pub parallel_motion: f64,
    pub vertical_tritones: f64,
    pub chord_duration: f64,
    pub number_of_pitches: u32,
    pub label: Option<String>,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; NUM_FEATURES] {
        [
            f64::from(self.range),
            self.repeated_notes,
            self.vertical_perfect_fourths,
            self.rhythmic_variability,
            self.parallel_motion,
            self.vertical_tritones,
            self.chord_duration,
            f64::from(self.number_of_pitches),
        ]
    }
}

/// Notes sounding at one onset instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Simultaneity {
    pub time_qn: f64,
    pub sounding: Vec<(u8, Voice)>,
}

/// Every distinct onset instant with the notes whose `[onset, offset)`
/// covers it.
pub fn simultaneities(notes: &NoteList) -> Vec<Simultaneity> {
    let notes = notes.notes();
    let mut out = Vec::new();
    let mut active: Vec<&NoteEvent> = Vec::new();
    let mut next = 0;
    while next < notes.len() {
        let t = notes[next].onset_qn;
        while next < notes.len() && notes[next].onset_qn == t {
            active.push(&notes[next]);
            next += 1;
        }
        active.retain(|n| n.offset_qn() > t);
        out.push(Simultaneity {
            time_qn: t,
            sounding: active.iter().map(|n| (n.pitch, n.voice)).collect(),
        });
    }
    out
}

pub fn feat_range(notes: &NoteList) -> u32 {
    let pitches = notes.notes().iter().map(|n| n.pitch);
    let hi = pitches.clone().max().unwrap_or(0);
    let lo = pitches.min().unwrap_or(0);
    u32::from(hi - lo)
}

fn by_voice(notes: &NoteList) -> BTreeMap<Voice, Vec<&NoteEvent>> {
    let mut voices: BTreeMap<Voice, Vec<&NoteEvent>> = BTreeMap::new();
    for n in notes.notes() {
        voices.entry(n.voice).or_default().push(n);
    }
    voices
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn feat_repeated_notes(notes: &NoteList) -> f64 {
    let (mut repeats, mut intervals) = (0, 0);
    for line in by_voice(notes).values() {
        for w in line.windows(2) {
            intervals += 1;
            if w[0].pitch == w[1].pitch {
                repeats += 1;
            }
        }
    }
    ratio(repeats, intervals)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct VerticalPairs {
    total: usize,
    fourths: usize,
    tritones: usize,
}

fn vertical_pairs(notes: &NoteList) -> VerticalPairs {
    let mut pairs = VerticalPairs::default();
    for s in simultaneities(notes) {
        for (i, &(a, _)) in s.sounding.iter().enumerate() {
            for &(b, _) in &s.sounding[i + 1..] {
                pairs.total += 1;
                match a.abs_diff(b) % 12 {
                    PERFECT_FOURTH => pairs.fourths += 1,
                    TRITONE => pairs.tritones += 1,
                    _ => {}
                }
            }
        }
    }
    pairs
}

pub fn feat_vertical_perfect_fourths(notes: &NoteList) -> f64 {
    let p = vertical_pairs(notes);
    ratio(p.fourths, p.total)
}

pub fn feat_vertical_tritones(notes: &NoteList) -> f64 {
    let p = vertical_pairs(notes);
    ratio(p.tritones, p.total)
}

/// Population coefficient of variation of note durations.
pub fn feat_rhythmic_variability(notes: &NoteList) -> f64 {
    if notes.len() < 2 {
        return 0.0;
    }
    // Sorted so the sums do not depend on note order.
    let mut durations: Vec<f64> = notes.notes().iter().map(|n| n.duration_qn).collect();
    durations.sort_by(f64::total_cmp);
    let n = durations.len() as f64;
    let mean = durations.iter().sum::<f64>() / n;
    let var = durations.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    var.sqrt() / mean
}

/// Per voice, the highest pitch starting at each distinct onset.
fn top_lines(notes: &NoteList) -> Vec<Vec<(f64, u8)>> {
    by_voice(notes)
        .into_values()
        .map(|line| {
            let mut top: Vec<(f64, u8)> = Vec::new();
            for n in line {
                match top.last_mut() {
                    Some((t, p)) if *t == n.onset_qn => *p = (*p).max(n.pitch),
                    _ => top.push((n.onset_qn, n.pitch)),
                }
            }
            top
        })
        .collect()
}

pub fn feat_parallel_motion(notes: &NoteList) -> f64 {
    let lines = top_lines(notes);
    let (mut parallel, mut moves) = (0, 0);
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            let (mut x, mut y) = (1, 1);
            while x < a.len() && y < b.len() {
                let (ta, tb) = (a[x].0, b[y].0);
                if ta < tb {
                    x += 1;
                } else if tb < ta {
                    y += 1;
                } else {
                    let da = i16::from(a[x].1) - i16::from(a[x - 1].1);
                    let db = i16::from(b[y].1) - i16::from(b[y - 1].1);
                    if da != 0 && db != 0 {
                        moves += 1;
                        if da == db {
                            parallel += 1;
                        }
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
    }
    ratio(parallel, moves)
}

/// Mean length of maximal constant-pitch-set segments sounding at least two
/// distinct pitches.
pub fn feat_chord_duration(notes: &NoteList) -> f64 {
    let mut boundaries: Vec<f64> = notes
        .notes()
        .iter()
        .flat_map(|n| [n.onset_qn, n.offset_qn()])
        .collect();
    boundaries.sort_by(f64::total_cmp);
    boundaries.dedup();

    let mut by_offset: Vec<&NoteEvent> = notes.notes().iter().collect();
    by_offset.sort_by(|a, b| a.offset_qn().total_cmp(&b.offset_qn()));

    let mut counts = [0u32; 128];
    let mut mask = 0u128;
    let (mut next_on, mut next_off) = (0, 0);
    let ons = notes.notes();

    let mut total = 0.0;
    let mut chords = 0usize;
    let mut current: Option<(u128, f64)> = None;

    for w in boundaries.windows(2) {
        let t = w[0];
        while next_off < by_offset.len() && by_offset[next_off].offset_qn() <= t {
            let p = by_offset[next_off].pitch as usize;
            counts[p] -= 1;
            if counts[p] == 0 {
                mask &= !(1u128 << p);
            }
            next_off += 1;
        }
        while next_on < ons.len() && ons[next_on].onset_qn <= t {
            let p = ons[next_on].pitch as usize;
            counts[p] += 1;
            mask |= 1u128 << p;
            next_on += 1;
        }
        match current {
            Some((m, _)) if m == mask => {}
            Some((m, start)) => {
                if m.count_ones() >= 2 {
                    total += t - start;
                    chords += 1;
                }
                current = Some((mask, t));
            }
            None => current = Some((mask, t)),
        }
    }
    if let (Some((m, start)), Some(&end)) = (current, boundaries.last()) {
        if m.count_ones() >= 2 {
            total += end - start;
            chords += 1;
        }
    }

    if chords == 0 {
        0.0
    } else {
        total / chords as f64
    }
}

pub fn feat_number_of_pitches(notes: &NoteList) -> u32 {
    notes.len() as u32
}

pub fn extract_all(notes: &NoteList, label: Option<String>) -> FeatureVector {
    let pairs = vertical_pairs(notes);
    FeatureVector {
        range: feat_range(notes),
        repeated_notes: feat_repeated_notes(notes),
        vertical_perfect_fourths: ratio(pairs.fourths, pairs.total),
        rhythmic_variability: feat_rhythmic_variability(notes),
        parallel_motion: feat_parallel_motion(notes),
        vertical_tritones: ratio(pairs.tritones, pairs.total),
        chord_duration: feat_chord_duration(notes),
        number_of_pitches: feat_number_of_pitches(notes),
        label,
    }
}
