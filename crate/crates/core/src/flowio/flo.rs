use std::path::Path;

use super::{read_bytes, write_bytes};
use crate::error::{Error, FormatError, Result};
use crate::motion::{MotionField, Stage};

/// Sanity tag at the start of every `.flo` file (`"PIEH"` in ASCII).
pub const FLO_MAGIC: f32 = 202021.25;
const HEADER_LEN: u64 = 12;

/// Serializes a field: magic, width, height as little-endian, then
/// interleaved little-endian `(u, v)` floats in row-major order.
pub fn encode_flo(m: &MotionField) -> Result<Vec<u8>> {
    if !m.is_finite() {
        return Err(Error::InvalidInput(
            "refusing to write non-finite motion to .flo".into(),
        ));
    }
    let (w, h) = (m.width(), m.height());
    let width =
        i32::try_from(w).map_err(|_| Error::InvalidInput(format!("width {w} too large")))?;
    let height =
        i32::try_from(h).map_err(|_| Error::InvalidInput(format!("height {h} too large")))?;
    let mut out = Vec::with_capacity(HEADER_LEN as usize + 8 * m.len());
    out.extend_from_slice(&FLO_MAGIC.to_le_bytes());
    out.extend_from_slice(&width.to_le_bytes());
    out.extend_from_slice(&height.to_le_bytes());
    for (u, v) in m.u().iter().zip(m.v()) {
        out.extend_from_slice(&u.to_le_bytes());
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

fn le_f32(b: &[u8]) -> f32 {
    f32::from_le_bytes([b[0], b[1], b[2], b[3]])
}

fn le_i32(b: &[u8]) -> i32 {
    i32::from_le_bytes([b[0], b[1], b[2], b[3]])
}

/// Parses `.flo` bytes. The field is tagged `External`.
pub fn decode_flo(bytes: &[u8]) -> Result<MotionField, FormatError> {
    let found = bytes.len() as u64;
    if bytes.len() < 4 {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN,
            found,
        });
    }
    if le_f32(&bytes[0..4]) != FLO_MAGIC {
        return Err(FormatError::NotFlo);
    }
    if found < HEADER_LEN {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN,
            found,
        });
    }
    let width = le_i32(&bytes[4..8]);
    let height = le_i32(&bytes[8..12]);
    if width < 1 || height < 1 {
        return Err(FormatError::BadDimensions {
            width: width.into(),
            height: height.into(),
        });
    }
    let n = width as u64 * height as u64;
    let expected = n
        .checked_mul(8)
        .and_then(|b| b.checked_add(HEADER_LEN))
        .unwrap_or(u64::MAX);
    if found < expected {
        return Err(FormatError::Truncated { expected, found });
    }
    if found > expected {
        return Err(FormatError::TrailingBytes { expected, found });
    }
    let n = n as usize;
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for px in bytes[HEADER_LEN as usize..].chunks_exact(8) {
        u.push(le_f32(&px[0..4]));
        v.push(le_f32(&px[4..8]));
    }
    Ok(MotionField::from_parts(
        width as usize,
        height as usize,
        u,
        v,
        Stage::External,
    ))
}

pub fn write_flo(m: &MotionField, path: &Path) -> Result<()> {
    write_bytes(path, &encode_flo(m)?)
}

pub fn read_flo(path: &Path) -> Result<MotionField> {
    let bytes = read_bytes(path)?;
    decode_flo(&bytes).map_err(|kind| Error::format(path, kind))
}
