use super::vlq;
use super::{EventKind, MidiDocument, MidiError, Track, TrackEvent};

/// Decodes a complete Standard MIDI File image.
///
/// Non-`MTrk` chunks are skipped, as are the contents of meta and sysex
/// events beyond what is stored in [`EventKind`]. Running status applies to
/// channel messages and is cancelled by meta and sysex events.
pub fn parse_smf(bytes: &[u8]) -> Result<MidiDocument, MidiError> {
    if bytes.len() < 8 || &bytes[0..4] != b"MThd" {
        return Err(MidiError::BadMagic);
    }
    let header_len = be_u32(&bytes[4..8]) as usize;
    let body = &bytes[8..];
    if header_len > body.len() {
        return Err(MidiError::TruncatedChunk { declared: header_len, remaining: body.len() });
    }
    if header_len < 6 {
        return Err(MidiError::UnsupportedFormat(format!("header chunk of {header_len} bytes")));
    }
    let format = be_u16(&body[0..2]);
    let declared_tracks = be_u16(&body[2..4]) as usize;
    let division = be_u16(&body[4..6]);
    match format {
        0 | 1 => {}
        2 => return Err(MidiError::UnsupportedFormat("format 2".into())),
        other => return Err(MidiError::UnsupportedFormat(format!("format {other}"))),
    }
    if division & 0x8000 != 0 {
        return Err(MidiError::UnsupportedFormat("SMPTE time division".into()));
    }
    if division == 0 {
        return Err(MidiError::UnsupportedFormat("zero time division".into()));
    }

    let mut rest = &body[header_len..];
    let mut tracks = Vec::with_capacity(declared_tracks);
    while tracks.len() < declared_tracks {
        if rest.len() < 8 {
            return Err(MidiError::TruncatedChunk { declared: 8, remaining: rest.len() });
        }
        let tag = &rest[0..4];
        let len = be_u32(&rest[4..8]) as usize;
        let data = &rest[8..];
        if len > data.len() {
            return Err(MidiError::TruncatedChunk { declared: len, remaining: data.len() });
        }
        if tag == b"MTrk" {
            tracks.push(parse_track(&data[..len], tracks.len())?);
        }
        rest = &data[len..];
    }

    Ok(MidiDocument { format, division, tracks })
}

fn parse_track(data: &[u8], index: usize) -> Result<Track, MidiError> {
    let malformed = |offset| MidiError::MalformedEvent { track: index, offset };
    let mut events = Vec::new();
    let mut pos = 0;
    let mut running: Option<u8> = None;

    while pos < data.len() {
        let (delta, used) = vlq::decode(&data[pos..])?;
        pos += used;
        let &first = data.get(pos).ok_or_else(|| malformed(pos))?;

        let kind = if first == 0xFF {
            running = None;
            let &kind = data.get(pos + 1).ok_or_else(|| malformed(pos))?;
            let (len, used) = vlq::decode(&data[(pos + 2).min(data.len())..])?;
            let start = pos + 2 + used;
            let end = start + len as usize;
            let payload = data.get(start..end).ok_or_else(|| malformed(pos))?;
            pos = end;
            EventKind::Meta { kind, data: payload.to_vec() }
        } else if first == 0xF0 || first == 0xF7 {
            running = None;
            let (len, used) = vlq::decode(&data[pos + 1..])?;
            let start = pos + 1 + used;
            let end = start + len as usize;
            let payload = data.get(start..end).ok_or_else(|| malformed(pos))?;
            pos = end;
            EventKind::SysEx { data: payload.to_vec() }
        } else if first >= 0xF0 {
            return Err(malformed(pos));
        } else {
            let status = if first & 0x80 != 0 {
                pos += 1;
                running = Some(first);
                first
            } else {
                running.ok_or_else(|| malformed(pos))?
            };
            let n = match status & 0xF0 {
                0xC0 | 0xD0 => 1,
                _ => 2,
            };
            let args = data.get(pos..pos + n).ok_or_else(|| malformed(pos))?;
            if args.iter().any(|&b| b & 0x80 != 0) {
                return Err(malformed(pos));
            }
            pos += n;
            let channel = status & 0x0F;
            match status & 0xF0 {
                0x80 => EventKind::NoteOff { channel, key: args[0], velocity: args[1] },
                0x90 => EventKind::NoteOn { channel, key: args[0], velocity: args[1] },
                _ => EventKind::Channel { status, data: args.to_vec() },
            }
        };

        let end = kind.is_end_of_track();
        events.push(TrackEvent { delta, kind });
        if end {
            return Ok(Track { events });
        }
    }
    Err(MidiError::MissingEndOfTrack(index))
}

fn be_u16(b: &[u8]) -> u16 {
    u16::from_be_bytes([b[0], b[1]])
}

fn be_u32(b: &[u8]) -> u32 {
    u32::from_be_bytes([b[0], b[1], b[2], b[3]])
}
