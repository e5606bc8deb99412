use std::collections::{HashMap, VecDeque};

use super::{EventKind, MidiDocument, MidiError, NoteEvent, NoteList, Voice, PERCUSSION_CHANNEL};

/// Pairs note-on and note-off events into notes.
///
/// A note-on with velocity 0 counts as a note-off. Overlapping notes of the
/// same key on the same channel and track pair first-in first-out. Notes
/// still sounding at End-of-Track are closed there; zero-length notes are
/// dropped. Percussion-channel events are ignored.
pub fn extract_notes(doc: &MidiDocument) -> Result<NoteList, MidiError> {
    let division = f64::from(doc.division);
    let to_qn = |ticks: u64| ticks as f64 / division;
    let mut notes = Vec::new();

    for (track_index, track) in doc.tracks.iter().enumerate() {
        let track_id = track_index as u16;
        let mut now: u64 = 0;
        let mut open: HashMap<(u8, u8), VecDeque<u64>> = HashMap::new();
        let close = |channel: u8, key: u8, on: u64, off: u64, notes: &mut Vec<NoteEvent>| {
            if off > on {
                notes.push(NoteEvent::new(
                    key,
                    to_qn(on),
                    to_qn(off - on),
                    Voice::new(track_id, channel),
                ));
            }
        };

        for event in &track.events {
            now += u64::from(event.delta);
            match event.kind {
                EventKind::NoteOn { channel, .. } | EventKind::NoteOff { channel, .. }
                    if channel == PERCUSSION_CHANNEL => {}
                EventKind::NoteOn { channel, key, velocity } if velocity > 0 => {
                    open.entry((channel, key)).or_default().push_back(now);
                }
                EventKind::NoteOn { channel, key, .. } | EventKind::NoteOff { channel, key, .. } => {
                    if let Some(on) = open.get_mut(&(channel, key)).and_then(VecDeque::pop_front) {
                        close(channel, key, on, now, &mut notes);
                    }
                }
                _ => {}
            }
        }

        // Whatever is still open ends at End-of-Track (the last event).
        let mut dangling: Vec<_> = open.into_iter().collect();
        dangling.sort_by_key(|(k, _)| *k);
        for ((channel, key), onsets) in dangling {
            for on in onsets {
                close(channel, key, on, now, &mut notes);
            }
        }
    }

    if notes.is_empty() {
        return Err(MidiError::NoPitchedNotes);
    }
    Ok(NoteList::new(notes))
}
