use super::vlq;
use super::{NoteList, PERCUSSION_CHANNEL};

const VELOCITY: u8 = 64;

/// Encodes `notes` as a format-0, single-track file with the given division.
///
/// Track indices are dropped; each note keeps its channel. At equal ticks
/// note-offs precede note-ons. Reading the result back with FIFO pairing
/// reproduces the input whenever onsets and durations are multiples of
/// `1/division` and no note is nested strictly inside another note of the
/// same key and channel.
pub fn write_smf(notes: &NoteList, division: u16) -> Vec<u8> {
    assert!(division > 0 && division & 0x8000 == 0, "division must be 1..=32767");
    let d = f64::from(division);

    // (tick, 0 = off / 1 = on, order, status, key, velocity)
    let mut events = Vec::with_capacity(notes.len() * 2);
    for (order, n) in notes.notes().iter().enumerate() {
        assert!(n.pitch <= 127, "pitch {} out of range", n.pitch);
        assert!(n.voice.channel < 16, "channel {} out of range", n.voice.channel);
        debug_assert!(n.voice.channel != PERCUSSION_CHANNEL, "percussion notes are not read back");
        let on = (n.onset_qn * d).round() as u64;
        let off = on + (n.duration_qn * d).round() as u64;
        events.push((on, 1u8, order, 0x90 | n.voice.channel, n.pitch, VELOCITY));
        events.push((off, 0u8, order, 0x80 | n.voice.channel, n.pitch, VELOCITY));
    }
    events.sort_by_key(|e| (e.0, e.1, e.2));

    let mut track = Vec::with_capacity(events.len() * 5 + 4);
    let mut now = 0u64;
    for (tick, _, _, status, key, velocity) in events {
        let delta = u32::try_from(tick - now).expect("delta time fits a VLQ");
        vlq::encode(delta, &mut track);
        track.extend([status, key, velocity]);
        now = tick;
    }
    track.extend([0x00, 0xFF, 0x2F, 0x00]);

    let mut out = Vec::with_capacity(track.len() + 22);
    out.extend(b"MThd");
    out.extend(6u32.to_be_bytes());
    out.extend(0u16.to_be_bytes());
    out.extend(1u16.to_be_bytes());
    out.extend(division.to_be_bytes());
    out.extend(b"MTrk");
    out.extend((track.len() as u32).to_be_bytes());
    out.extend(track);
    out
}
