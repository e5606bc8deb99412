//! Variable-length quantities as used for SMF delta times and meta lengths.

use super::MidiError;

/// Largest value representable in four VLQ bytes.
pub const MAX_VLQ: u32 = 0x0FFF_FFFF;

/// Appends the minimal big-endian base-128 encoding of `value`.
pub fn encode(value: u32, out: &mut Vec<u8>) {
    assert!(value <= MAX_VLQ, "VLQ value {value:#x} exceeds 28 bits");
    let mut groups = [0u8; 4];
    let mut n = 0;
    let mut v = value;
    loop {
        groups[n] = (v & 0x7F) as u8;
        n += 1;
        v >>= 7;
        if v == 0 {
            break;
        }
    }
    for i in (0..n).rev() {
        let cont = if i > 0 { 0x80 } else { 0 };
        out.push(groups[i] | cont);
    }
}

/// Decodes one VLQ from the front of `bytes`, returning the value and the
/// number of bytes consumed.
pub fn decode(bytes: &[u8]) -> Result<(u32, usize), MidiError> {
    let mut value = 0u32;
    for (i, &b) in bytes.iter().enumerate() {
        if i == 4 {
            return Err(MidiError::InvalidVlq);
        }
        value = (value << 7) | u32::from(b & 0x7F);
        if b & 0x80 == 0 {
            return Ok((value, i + 1));
        }
    }
    Err(MidiError::InvalidVlq)
}
