//! Independent reference implementations and random fixtures shared by
//! the integration tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeMap;

use composer_style::bpnn::{total_error, forward, Gradients, MlpModel};
use composer_style::gbt::{Direction, SplitCandidate, SplitParams};
use composer_style::midi::{NoteEvent, NoteList, Voice};
use rand::Rng;

pub const DIVISION: u16 = 480;

pub fn smf(division: u16, track: &[u8]) -> Vec<u8> {
    let mut out = b"MThd".to_vec();
    out.extend(6u32.to_be_bytes());
    out.extend([0, 0, 0, 1]);
    out.extend(division.to_be_bytes());
    out.extend(b"MTrk");
    out.extend((track.len() as u32).to_be_bytes());
    out.extend(track);
    out
}

/// C4 for one quarter, then E4 for an eighth, division 480.
pub fn documented() -> NoteList {
    let v = Voice::new(0, 0);
    NoteList::new(vec![NoteEvent::new(60, 0.0, 1.0, v), NoteEvent::new(64, 1.0, 0.5, v)])
}

/// C4 and E4 together for one quarter, division 480.
pub fn chord() -> NoteList {
    let v = Voice::new(0, 0);
    NoteList::new(vec![NoteEvent::new(60, 0.0, 1.0, v), NoteEvent::new(64, 0.0, 1.0, v)])
}

/// The `documented` notes with explicit status bytes.
pub const EXPLICIT: &[u8] = &[
    0x00, 0x90, 60, 100, //
    0x83, 0x60, 0x80, 60, 64, // delta 480
    0x00, 0x90, 64, 100, //
    0x81, 0x70, 0x80, 64, 64, // delta 240
    0x00, 0xFF, 0x2F, 0x00,
];

/// The `chord` notes; the second note-on and
/// the second note-off reuse the previous status byte.
pub const RUNNING: &[u8] = &[
    0x00, 0x90, 60, 100, //
    0x00, 64, 100, //
    0x83, 0x60, 0x80, 60, 64, //
    0x00, 64, 64, //
    0x00, 0xFF, 0x2F, 0x00,
];

/// The same chord with every status byte present.
pub const RUNNING_EXPLICIT: &[u8] = &[
    0x00, 0x90, 60, 100, //
    0x00, 0x90, 64, 100, //
    0x83, 0x60, 0x80, 60, 64, //
    0x00, 0x80, 64, 64, //
    0x00, 0xFF, 0x2F, 0x00,
];

/// The `documented` notes ended by note-ons with velocity 0.
pub const VELOCITY_ZERO_OFF: &[u8] = &[
    0x00, 0x90, 60, 100, //
    0x83, 0x60, 60, 0, // running status, velocity 0
    0x00, 64, 100, //
    0x81, 0x70, 64, 0, //
    0x00, 0xFF, 0x2F, 0x00,
];

/// Random notes the format-0 writer can represent exactly: track 0, no
/// percussion channel, tick-aligned times, and for every (channel, key)
/// both onsets and offsets non-decreasing, so no note sits strictly inside
/// another of the same key.
pub fn representable_notes(rng: &mut impl Rng, max_notes: usize) -> NoteList {
    let n = rng.gen_range(1..=max_notes);
    let channels: Vec<u8> = (0..rng.gen_range(1..=4)).map(|_| [0, 1, 2, 5, 10, 15][rng.gen_range(0..6)]).collect();
    let keys: Vec<u8> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(0..=127)).collect();
    // (channel, key) -> (last onset, last offset) in ticks
    let mut last: BTreeMap<(u8, u8), (u64, u64)> = BTreeMap::new();
    let d = f64::from(DIVISION);
    let notes = (0..n)
        .map(|_| {
            let ch = channels[rng.gen_range(0..channels.len())];
            let key = keys[rng.gen_range(0..keys.len())];
            let (prev_on, prev_off) = last.get(&(ch, key)).copied().unwrap_or((0, 0));
            let on = if rng.gen_bool(0.2) { prev_on } else { prev_on + rng.gen_range(0..2000) };
            let off = (on + rng.gen_range(1..1500)).max(prev_off);
            last.insert((ch, key), (on, off));
            NoteEvent::new(key, on as f64 / d, (off - on) as f64 / d, Voice::new(0, ch))
        })
        .collect();
    NoteList::new(notes)
}

/// Random multi-voice piece on a 1/8 quarter-note grid.
pub fn random_piece(rng: &mut impl Rng) -> NoteList {
    let voices = rng.gen_range(1..=4);
    let mut notes = Vec::new();
    for v in 0..voices {
        let voice = Voice::new(v as u16, (v * 3 % 16) as u8);
        let mut t = f64::from(rng.gen_range(0..4u8)) / 8.0;
        for _ in 0..rng.gen_range(1..=12) {
            let dur = f64::from(rng.gen_range(1..=16u8)) / 8.0;
            let pitch = rng.gen_range(30..=90);
            notes.push(NoteEvent::new(pitch, t, dur, voice));
            // Gaps, legato and overlaps all occur.
            t += dur + f64::from(rng.gen_range(-2i8..=3)) / 8.0;
            t = t.max(0.0);
        }
    }
    NoteList::new(notes)
}

fn oracle_gain(gl: f64, hl: f64, gr: f64, hr: f64, p: &SplitParams) -> f64 {
    let (g, h) = (gl + gr, hl + hr);
    0.5 * (gl * gl / (hl + p.lambda) + gr * gr / (hr + p.lambda) - g * g / (h + p.lambda)) - p.gamma
}

fn preferred(a: &SplitCandidate, b: &SplitCandidate) -> bool {
    if a.gain != b.gain {
        return a.gain > b.gain;
    }
    if a.feature != b.feature {
        return a.feature < b.feature;
    }
    if a.threshold != b.threshold {
        return a.threshold < b.threshold;
    }
    a.default_direction == Direction::Left && b.default_direction == Direction::Right
}

/// Enumerates every feature, every threshold between adjacent distinct
/// present values, and both default directions when the node has missing
/// values, summing each child's statistics directly from the rows.
#[allow(clippy::needless_range_loop)]
pub fn brute_force_split(
    rows: &[Vec<f64>],
    node: &[usize],
    grad: &[f64],
    hess: &[f64],
    params: &SplitParams,
) -> Option<SplitCandidate> {
    if node.len() < 2 {
        return None;
    }
    let n_features = rows[0].len();
    let mut best: Option<SplitCandidate> = None;
    for f in 0..n_features {
        let mut values: Vec<f64> = node.iter().map(|&i| rows[i][f]).filter(|v| !v.is_nan()).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let has_missing = node.iter().any(|&i| rows[i][f].is_nan());
        let dirs: &[Direction] = if has_missing { &[Direction::Left, Direction::Right] } else { &[Direction::Left] };
        for w in values.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let thr = if mid <= w[0] { w[1] } else { mid };
            for &dir in dirs {
                let (mut gl, mut hl, mut gr, mut hr) = (0.0, 0.0, 0.0, 0.0);
                for &i in node {
                    let v = rows[i][f];
                    let left = if v.is_nan() { dir == Direction::Left } else { v < thr };
                    if left {
                        gl += grad[i];
                        hl += hess[i];
                    } else {
                        gr += grad[i];
                        hr += hess[i];
                    }
                }
                if hl < params.min_child_hessian || hr < params.min_child_hessian {
                    continue;
                }
                let cand = SplitCandidate { feature: f, threshold: thr, default_direction: dir, gain: oracle_gain(gl, hl, gr, hr, params) };
                if cand.gain > 0.0 && best.as_ref().is_none_or(|b| preferred(&cand, b)) {
                    best = Some(cand);
                }
            }
        }
    }
    best
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`,
/// stopped once the bracket is narrower than `tol`. `less(x, y)` decides
/// whether `f(x) < f(y)`.
pub fn golden_section(mut a: f64, mut b: f64, tol: f64, less: impl Fn(f64, f64) -> bool) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    for _ in 0..500 {
        if (b - a).abs() <= tol {
            break;
        }
        if less(c, d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    0.5 * (a + b)
}

/// Probability that a random positive outscores a random negative, ties
/// counted one half, by explicit enumeration of all pairs.
pub fn pairwise_auc(scores: &[f64], positive: &[bool]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &si) in scores.iter().enumerate() {
        if !positive[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if positive[j] {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                wins += 1.0;
            } else if si == sj {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

fn block_mut(model: &mut MlpModel, block: usize) -> &mut Vec<f64> {
    match block {
        0 => &mut model.w_hidden,
        1 => &mut model.theta_hidden,
        2 => &mut model.w_output,
        _ => &mut model.theta_output,
    }
}

fn error_at(model: &MlpModel, x: &[f64], t: &[f64]) -> f64 {
    total_error(t, &forward(model, x).unwrap().output).unwrap()
}

/// Central-difference estimate of the error gradient for every parameter,
/// in the same block layout as the analytic gradients. Signs follow the
/// error itself, i.e. the opposite of a descent direction.
pub fn numeric_error_gradient(model: &MlpModel, x: &[f64], t: &[f64], eps: f64) -> Gradients {
    let mut out = Gradients {
        w_hidden: vec![0.0; model.w_hidden.len()],
        theta_hidden: vec![0.0; model.theta_hidden.len()],
        w_output: vec![0.0; model.w_output.len()],
        theta_output: vec![0.0; model.theta_output.len()],
    };
    let mut probe = model.clone();
    for block in 0..4 {
        for k in 0..block_mut(&mut probe, block).len() {
            let orig = block_mut(&mut probe, block)[k];
            block_mut(&mut probe, block)[k] = orig + eps;
            let up = error_at(&probe, x, t);
            block_mut(&mut probe, block)[k] = orig - eps;
            let down = error_at(&probe, x, t);
            block_mut(&mut probe, block)[k] = orig;
            let g = (up - down) / (2.0 * eps);
            match block {
                0 => out.w_hidden[k] = g,
                1 => out.theta_hidden[k] = g,
                2 => out.w_output[k] = g,
                _ => out.theta_output[k] = g,
            }
        }
    }
    out
}

pub fn flatten(g: &Gradients) -> Vec<f64> {
    g.w_hidden.iter().chain(&g.theta_hidden).chain(&g.w_output).chain(&g.theta_output).copied().collect()
}

/// Passes when the absolute difference is at most `floor` or the relative
/// difference is at most `rel`.
pub fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    let diff = (a - b).abs();
    diff <= floor || diff <= rel * a.abs().max(b.abs())
}

fn mono(pitches: &[u8]) -> NoteList {
    let v = Voice::new(0, 0);
    pitches.iter().enumerate().map(|(i, &p)| NoteEvent::new(p, i as f64, 1.0, v)).collect()
}

fn together(pitches: &[u8], dur: f64) -> NoteList {
    pitches.iter().enumerate().map(|(i, &p)| NoteEvent::new(p, 0.0, dur, Voice::new(0, i as u8))).collect()
}

fn two_voices(a: [u8; 2], b: [u8; 2]) -> NoteList {
    let (va, vb) = (Voice::new(0, 0), Voice::new(0, 1));
    NoteList::new(vec![
        NoteEvent::new(a[0], 0.0, 1.0, va),
        NoteEvent::new(a[1], 1.0, 1.0, va),
        NoteEvent::new(b[0], 0.0, 1.0, vb),
        NoteEvent::new(b[1], 1.0, 1.0, vb),
    ])
}

/// Hand-computed feature values; returns the names of the examples that
/// do not match exactly.
pub fn feature_example_failures() -> Vec<String> {
    use composer_style::features::*;
    let v = Voice::new(0, 0);
    let durations: NoteList =
        [1.0, 1.0, 2.0, 2.0].iter().scan(0.0, |t, &d| { let n = NoteEvent::new(60, *t, d, v); *t += d; Some(n) }).collect();
    let two_chords = NoteList::new(vec![
        NoteEvent::new(60, 0.0, 1.0, v),
        NoteEvent::new(64, 0.0, 1.0, Voice::new(0, 1)),
        NoteEvent::new(62, 2.0, 3.0, v),
        NoteEvent::new(67, 2.0, 3.0, Voice::new(0, 1)),
    ]);
    let overlap = NoteList::new(vec![NoteEvent::new(60, 0.0, 2.0, v), NoteEvent::new(60, 1.0, 2.0, v)]);
    let fourth = extract_all(&together(&[60, 65], 2.0), None);

    let checks: Vec<(&str, bool)> = vec![
        ("range 60,72", feat_range(&mono(&[60, 72])) == 12),
        ("range 55,60,79", feat_range(&mono(&[55, 60, 79])) == 24),
        ("repeated 60,60,60", feat_repeated_notes(&mono(&[60, 60, 60])) == 1.0),
        ("repeated 60,60,62", feat_repeated_notes(&mono(&[60, 60, 62])) == 0.5),
        ("fourths 60,65", feat_vertical_perfect_fourths(&together(&[60, 65], 1.0)) == 1.0),
        ("fourths 60,65,67", feat_vertical_perfect_fourths(&together(&[60, 65, 67], 1.0)) == 1.0 / 3.0),
        ("rhythm 1,1,2,2", feat_rhythmic_variability(&durations) == 0.5 / 1.5),
        ("parallel +2/+2", feat_parallel_motion(&two_voices([60, 62], [64, 66])) == 1.0),
        ("parallel +2/-2", feat_parallel_motion(&two_voices([60, 62], [64, 62])) == 0.0),
        ("tritones 60,66", feat_vertical_tritones(&together(&[60, 66], 1.0)) == 1.0),
        ("tritones 60,66,72", feat_vertical_tritones(&together(&[60, 66, 72], 1.0)) == 2.0 / 3.0),
        ("chord 60,64,67 x2", feat_chord_duration(&together(&[60, 64, 67], 2.0)) == 2.0),
        ("chord 1 rest 3", feat_chord_duration(&two_chords) == 2.0),
        ("pitches overlapping", feat_number_of_pitches(&overlap) == 2),
        (
            "extract 60&65",
            fourth.to_array() == [5.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0, 2.0],
        ),
    ];
    checks.into_iter().filter(|(_, ok)| !ok).map(|(name, _)| name.to_string()).collect()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// The two-voice fixture's features next to its golden vector.
pub fn golden_fixture() -> ([f64; 8], [f64; 8]) {
    use composer_style::features::extract_all;
    use composer_style::midi::{extract_notes, parse_smf};
    let bytes = std::fs::read(fixture_path("two_voice.mid")).unwrap();
    let notes = extract_notes(&parse_smf(&bytes).unwrap()).unwrap();
    let text = std::fs::read_to_string(fixture_path("two_voice.golden.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    let golden: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
    (extract_all(&notes, None).to_array(), golden.try_into().unwrap())
}

/// Checks the transposition, time-scaling and voice-permutation
/// invariants plus the value bounds on one piece; returns a description
/// of the first violation.
pub fn feature_invariant_violation(notes: &NoteList, rng: &mut impl Rng) -> Option<String> {
    use composer_style::features::extract_all;
    let base = extract_all(notes, None);
    let arr = base.to_array();
    let fractions = [
        base.repeated_notes,
        base.vertical_perfect_fourths,
        base.parallel_motion,
        base.vertical_tritones,
    ];
    if fractions.iter().any(|f| !(0.0..=1.0).contains(f))
        || base.range > 127
        || base.rhythmic_variability < 0.0
        || base.chord_duration < 0.0
        || base.number_of_pitches < 1
        || base.vertical_perfect_fourths + base.vertical_tritones > 1.0 + 1e-12
    {
        return Some(format!("bounds violated: {arr:?}"));
    }
    for k in [-12i16, -7, -1, 1, 7, 12] {
        let shifted = notes.map(|n| NoteEvent { pitch: (i16::from(n.pitch) + k) as u8, ..*n });
        if extract_all(&shifted, None).to_array() != arr {
            return Some(format!("transposition by {k} changed features"));
        }
    }
    for c in [0.5, 2.0, 4.0] {
        let scaled = notes.map(|n| NoteEvent { onset_qn: n.onset_qn * c, duration_qn: n.duration_qn * c, ..*n });
        let s = extract_all(&scaled, None).to_array();
        for j in 0..8 {
            let expected = if j == 6 { c * arr[j] } else { arr[j] };
            if s[j] != expected {
                return Some(format!("time scaling by {c} changed feature {j}: {} vs {expected}", s[j]));
            }
        }
    }
    let mut voices: Vec<Voice> = notes.notes().iter().map(|n| n.voice).collect();
    voices.sort();
    voices.dedup();
    let mut targets: Vec<Voice> = (0..voices.len()).map(|i| Voice::new(7 - i as u16, (i * 5 % 9) as u8)).collect();
    use rand::seq::SliceRandom;
    targets.shuffle(rng);
    let relabeled = notes.map(|n| {
        let i = voices.binary_search(&n.voice).unwrap();
        NoteEvent { voice: targets[i], ..*n }
    });
    if extract_all(&relabeled, None).to_array() != arr {
        return Some("voice relabeling changed features".into());
    }
    None
}

/// Gaussian-free blobs: class centers uniform in a box, uniform noise.
pub fn blobs(n: usize, classes: usize, features: usize, spread: f64, seed: u64) -> composer_style::gbt::TrainingMatrix {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..classes).map(|_| (0..features).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect();
    let labels: Vec<usize> = (0..n).map(|i| i % classes).collect();
    let rows: Vec<Vec<f64>> = labels
        .iter()
        .map(|&c| centers[c].iter().map(|m| m + rng.gen_range(-spread..spread)).collect())
        .collect();
    composer_style::gbt::TrainingMatrix::new(&rows, labels).unwrap()
}

/// Compares the exact greedy search against [`brute_force_split`] on one
/// random dataset. Values, gradients and hessians are multiples of 1/16
/// or 1/4 so every partial sum is exact in any order.
pub fn split_oracle_case(seed: u64) -> Result<(), String> {
    use composer_style::gbt::{find_best_split, SortedFeatureBlocks, TrainingMatrix};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=32);
    let f = rng.gen_range(1..=8);
    let levels = rng.gen_range(2..=12);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..f)
                .map(|_| if rng.gen_bool(0.1) { f64::NAN } else { f64::from(rng.gen_range(0..levels)) / 4.0 - 1.0 })
                .collect()
        })
        .collect();
    let grad: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(-32..=32)) / 16.0).collect();
    let hess: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(1..=16)) / 16.0).collect();
    let params = SplitParams {
        lambda: [0.0, 0.5, 1.0, 2.0][rng.gen_range(0..4)],
        gamma: [0.0, 0.0625, 0.25][rng.gen_range(0..3)],
        min_child_hessian: [0.0, 0.25, 1.0][rng.gen_range(0..3)],
    };
    let node: Vec<usize> = if rng.gen_bool(0.5) {
        (0..n).collect()
    } else {
        (0..n).filter(|_| rng.gen_bool(0.7)).collect()
    };
    let data = TrainingMatrix::new(&rows, vec![0; n]).map_err(|e| e.to_string())?;
    let blocks = SortedFeatureBlocks::build(&data);
    let got = find_best_split(&blocks, &node, &grad, &hess, &params);
    let want = brute_force_split(&rows, &node, &grad, &hess, &params);
    let same = match (&got, &want) {
        (None, None) => true,
        (Some(a), Some(b)) => {
            a.feature == b.feature
                && a.threshold.to_bits() == b.threshold.to_bits()
                && a.default_direction == b.default_direction
                && a.gain.to_bits() == b.gain.to_bits()
        }
        _ => false,
    };
    if same {
        Ok(())
    } else {
        Err(format!("seed {seed}: search {got:?}, oracle {want:?}"))
    }
}

/// One random (G, H, λ) triple with `H + λ` log-uniform in [1e-3, 1e3].
/// Checks that the closed-form weight beats nearby weights on the
/// regularized leaf term and agrees with golden-section search.
pub fn leaf_weight_case(rng: &mut impl Rng) -> Result<(), String> {
    use composer_style::gbt::leaf_weight;
    let g: f64 = rng.gen_range(-10.0..10.0);
    let s = 10f64.powf(rng.gen_range(-3.0..3.0));
    let lambda = s * rng.gen_range(0.0..1.0);
    let h = s - lambda;
    let w = leaf_weight(g, h, lambda).map_err(|e| e.to_string())?;
    let term = |w: f64| g * w + 0.5 * (h + lambda) * w * w;
    for d in [1e-3, 1e-1, -1e-3, -1e-1] {
        if term(w).partial_cmp(&term(w + d)) != Some(std::cmp::Ordering::Less) {
            return Err(format!("G={g} H={h} λ={lambda}: ω*={w} not better than ω*{d:+}"));
        }
    }
    // f(x) < f(y) for x < y exactly when G + (H+λ)(x+y)/2 > 0; the
    // factored form stays accurate on the flat part of the parabola.
    let less = |x: f64, y: f64| {
        let slope = g + 0.5 * (h + lambda) * (x + y);
        if x < y { slope > 0.0 } else { slope < 0.0 }
    };
    let bound = 2.0 * g.abs() / (h + lambda) + 1.0;
    let numeric = golden_section(-bound, bound, 1e-11, less);
    if (numeric - w).abs() > 1e-9 {
        return Err(format!("G={g} H={h} λ={lambda}: ω*={w}, golden section {numeric}"));
    }
    Ok(())
}

/// Analytic descent direction of a random 8-16-5 network against central
/// differences; returns the worst parameter on failure.
pub fn gradcheck_case(rng: &mut impl Rng) -> Result<(), String> {
    use composer_style::bpnn::{backward, one_hot};
    let model = MlpModel::random(8, 16, 5, rng);
    let x: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..1.0)).collect();
    let t = one_hot(rng.gen_range(0..5), 5);
    let analytic = flatten(&backward(&model, &x, &t).unwrap());
    let numeric = flatten(&numeric_error_gradient(&model, &x, &t, 1e-6));
    for (k, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
        if !close(-a, *n, 1e-4, 1e-8) {
            return Err(format!("parameter {k}: analytic {} numeric {n}", -a));
        }
    }
    Ok(())
}

/// Random scores with deliberate ties; trapezoidal AUC against the
/// pairwise statistic.
pub fn auc_case(rng: &mut impl Rng) -> Result<(), String> {
    use composer_style::eval::{auc, roc_curve};
    let n = rng.gen_range(2..=200);
    let levels = rng.gen_range(1..=n.max(2));
    let mut positive: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    positive[0] = true;
    positive[1] = false;
    let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(0..levels as u32)) / levels as f64).collect();
    let trapezoid = auc(&roc_curve(&scores, &positive).map_err(|e| e.to_string())?);
    let pairs = pairwise_auc(&scores, &positive);
    if (trapezoid - pairs).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(format!("n={n}: trapezoid {trapezoid}, pairwise {pairs}"))
    }
}

pub fn xor() -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<usize>) {
    use composer_style::bpnn::one_hot;
    let x = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
    let y = vec![0, 1, 1, 0];
    let t = y.iter().map(|&c| one_hot(c, 2)).collect();
    (x, t, y)
}

/// Mean per-sample error and correct count after training on XOR with the
/// frozen configuration.
pub fn xor_run() -> (f64, usize) {
    use composer_style::bpnn::{fit, predict_class, TrainConfig};
    let (x, t, y) = xor();
    let cfg = TrainConfig { learning_rate: 0.5, epochs: 10_000, seed: 42, hidden_size: 4 };
    let model = fit(&x, &t, &cfg).unwrap();
    let err = x.iter().zip(&t).map(|(xi, ti)| error_at(&model, xi, ti)).sum::<f64>() / 4.0;
    let correct = x.iter().zip(&y).filter(|(xi, &yi)| predict_class(&model, xi).unwrap() == yi).count();
    (err, correct)
}
