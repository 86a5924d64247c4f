use std::path::Path;

use super::read_bytes;
use crate::depth::RawDepthMap;
use crate::error::{Error, FormatError, Result};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn token(&mut self, what: &str) -> Result<&'a str, FormatError> {
        self.skip_whitespace();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(FormatError::BadHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| FormatError::BadHeader(format!("{what} is not ASCII")))
    }
}

fn dimension(tok: &str, what: &str) -> Result<usize, FormatError> {
    match tok.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(FormatError::BadHeader(format!("invalid {what} {tok:?}"))),
    }
}

/// Parses a grayscale (`Pf`) portable float map.
///
/// A negative scale marks little-endian samples, a positive one big-endian.
/// Rows are stored bottom-up and are flipped so the result is top-down.
pub fn decode_pfm(bytes: &[u8]) -> Result<RawDepthMap, FormatError> {
    let mut cur = Cursor { bytes, pos: 0 };
    match cur.token("magic")? {
        "Pf" => {}
        "PF" => {
            return Err(FormatError::UnexpectedLayout {
                expected: "grayscale PFM (Pf)".into(),
                found: "color PFM (PF)".into(),
            })
        }
        other => {
            return Err(FormatError::BadHeader(format!(
                "bad magic {:?}, expected \"Pf\"",
                other.chars().take(8).collect::<String>()
            )))
        }
    }
    let width = dimension(cur.token("width")?, "width")?;
    let height = dimension(cur.token("height")?, "height")?;
    let scale_tok = cur.token("scale")?;
    let scale: f64 = scale_tok
        .parse()
        .ok()
        .filter(|s: &f64| s.is_finite() && *s != 0.0)
        .ok_or_else(|| FormatError::BadHeader(format!("invalid scale {scale_tok:?}")))?;
    let little_endian = scale < 0.0;
    // Exactly one whitespace byte separates the header from the payload.
    if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
        return Err(FormatError::BadHeader(
            "missing separator after scale".into(),
        ));
    }
    let payload = &bytes[cur.pos + 1..];

    let n = width
        .checked_mul(height)
        .ok_or(FormatError::BadDimensions {
            width: width as i64,
            height: height as i64,
        })?;
    let need = n as u64 * 4;
    let found = payload.len() as u64;
    if found < need {
        let header = cur.pos as u64 + 1;
        return Err(FormatError::Truncated {
            expected: header + need,
            found: header + found,
        });
    }

    let mut values = vec![0.0f64; n];
    for (file_row, row) in payload[..n * 4].chunks_exact(width * 4).enumerate() {
        let out_row = height - 1 - file_row;
        for (col, b) in row.chunks_exact(4).enumerate() {
            let raw = [b[0], b[1], b[2], b[3]];
            let x = if little_endian {
                f32::from_le_bytes(raw)
            } else {
                f32::from_be_bytes(raw)
            };
            let index = out_row * width + col;
            if !x.is_finite() {
                return Err(FormatError::NonFinite { index });
            }
            values[index] = f64::from(x);
        }
    }
    RawDepthMap::new(width, height, values).map_err(|e| FormatError::BadHeader(e.to_string()))
}

pub fn read_depth_pfm(path: &Path) -> Result<RawDepthMap> {
    let bytes = read_bytes(path)?;
    decode_pfm(&bytes).map_err(|kind| Error::format(path, kind))
}
