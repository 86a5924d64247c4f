//! Readers and writers for depth inputs and flow outputs.
//!
//! Depth comes in as single-channel 16-bit PNG or grayscale PFM. Flow goes
//! out as Middlebury `.flo` (raw UV) and 8-bit RGB PNG (colorized).
//! All multi-byte values are encoded with explicit endianness.

mod flo;
mod pfm;
mod png;

use std::path::Path;

pub use self::flo::{decode_flo, encode_flo, read_flo, write_flo, FLO_MAGIC};
pub use self::pfm::{decode_pfm, read_depth_pfm};
pub use self::png::{
    decode_depth_png16, decode_png_rgb, encode_depth_png16, encode_png_gray, encode_png_rgb,
    read_depth_png16, read_png_rgb, write_depth_png16, write_png_gray, write_png_rgb,
};

use crate::depth::RawDepthMap;
use crate::error::{Error, FormatError, Result};

/// Extensions accepted as depth inputs.
pub const DEPTH_EXTENSIONS: [&str; 2] = ["png", "pfm"];

/// Reads a depth file, picking the decoder from the extension.
pub fn read_depth(path: &Path) -> Result<RawDepthMap> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("png") => read_depth_png16(path),
        Some("pfm") => read_depth_pfm(path),
        other => Err(Error::format(
            path,
            FormatError::UnexpectedLayout {
                expected: "a .png or .pfm depth file".into(),
                found: match other {
                    Some(e) => format!(".{e}"),
                    None => "no extension".into(),
                },
            },
        )),
    }
}

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
