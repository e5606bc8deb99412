//! Standard MIDI File ingestion.
//!
//! [`parse_smf`] decodes the chunk structure of a format 0/1 file into a
//! [`MidiDocument`], [`extract_notes`] pairs note-on/note-off events into a
//! [`NoteList`] measured in quarter notes, and [`write_smf`] produces a
//! format-0 file from a note list (used for round-trip tests and the
//! synthetic corpus).

mod notes;
mod parse;
pub mod vlq;
mod write;

pub use notes::extract_notes;
pub use parse::parse_smf;
pub use write::write_smf;

use std::cmp::Ordering;

use thiserror::Error;

/// GM percussion channel (channel 10, zero-indexed).
pub const PERCUSSION_CHANNEL: u8 = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MidiError {
    #[error("missing MThd header chunk")]
    BadMagic,
    #[error("chunk declares {declared} bytes but only {remaining} remain")]
    TruncatedChunk { declared: usize, remaining: usize },
    #[error("invalid variable-length quantity")]
    InvalidVlq,
    #[error("unsupported file: {0}")]
    UnsupportedFormat(String),
    #[error("track {0} does not end with an End-of-Track event")]
    MissingEndOfTrack(usize),
    #[error("malformed event in track {track} at byte {offset}")]
    MalformedEvent { track: usize, offset: usize },
    #[error("file contains no pitched notes")]
    NoPitchedNotes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidiDocument {
    pub format: u16,
    /// Ticks per quarter note; always positive.
    pub division: u16,
    pub tracks: Vec<Track>,
}

impl MidiDocument {
    /// Number of note-on events with non-zero velocity across all tracks.
    pub fn note_on_count(&self) -> usize {
        self.tracks
            .iter()
            .flat_map(|t| &t.events)
            .filter(|e| matches!(e.kind, EventKind::NoteOn { velocity, .. } if velocity > 0))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Track {
    pub events: Vec<TrackEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackEvent {
    pub delta: u32,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    NoteOff { channel: u8, key: u8, velocity: u8 },
    NoteOn { channel: u8, key: u8, velocity: u8 },
    /// Any other channel message. Carried so delta times stay intact, but
    /// otherwise ignored.
    Channel { status: u8, data: Vec<u8> },
    Meta { kind: u8, data: Vec<u8> },
    SysEx { data: Vec<u8> },
}

impl EventKind {
    pub const END_OF_TRACK: u8 = 0x2F;

    pub fn is_end_of_track(&self) -> bool {
        matches!(self, EventKind::Meta { kind, .. } if *kind == Self::END_OF_TRACK)
    }
}

/// (track index, channel) pair identifying a melodic line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Voice {
    pub track: u16,
    pub channel: u8,
}

impl Voice {
    pub fn new(track: u16, channel: u8) -> Self {
        Voice { track, channel }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoteEvent {
    pub pitch: u8,
    pub onset_qn: f64,
    pub duration_qn: f64,
    pub voice: Voice,
}

impl NoteEvent {
    pub fn new(pitch: u8, onset_qn: f64, duration_qn: f64, voice: Voice) -> Self {
        NoteEvent { pitch, onset_qn, duration_qn, voice }
    }

    pub fn offset_qn(&self) -> f64 {
        self.onset_qn + self.duration_qn
    }

    pub fn is_valid(&self) -> bool {
        self.pitch <= 127
            && self.onset_qn.is_finite()
            && self.onset_qn >= 0.0
            && self.duration_qn.is_finite()
            && self.duration_qn > 0.0
    }

    fn sort_cmp(&self, other: &Self) -> Ordering {
        self.onset_qn
            .total_cmp(&other.onset_qn)
            .then(self.voice.cmp(&other.voice))
            .then(self.pitch.cmp(&other.pitch))
            .then(self.duration_qn.total_cmp(&other.duration_qn))
    }
}

/// Notes sorted by (onset, voice, pitch, duration).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoteList {
    notes: Vec<NoteEvent>,
}

impl NoteList {
    /// Sorts `notes` into canonical order. Invalid notes are kept; callers
    /// that need the invariants check [`NoteList::is_valid`].
    pub fn new(mut notes: Vec<NoteEvent>) -> Self {
        notes.sort_by(NoteEvent::sort_cmp);
        NoteList { notes }
    }

    pub fn notes(&self) -> &[NoteEvent] {
        &self.notes
    }

    pub fn len(&self) -> usize {
        self.notes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.notes.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.notes.iter().all(NoteEvent::is_valid)
    }

    pub fn into_inner(self) -> Vec<NoteEvent> {
        self.notes
    }

    /// Applies `f` to every note and re-sorts.
    pub fn map(&self, f: impl FnMut(&NoteEvent) -> NoteEvent) -> NoteList {
        NoteList::new(self.notes.iter().map(f).collect())
    }
}

impl FromIterator<NoteEvent> for NoteList {
    fn from_iter<I: IntoIterator<Item = NoteEvent>>(iter: I) -> Self {
        NoteList::new(iter.into_iter().collect())
    }
}
