use std::io::Cursor;
use std::path::Path;

use png::{BitDepth, ColorType, Decoder, Encoder, Transformations};

use super::{read_bytes, write_bytes};
use crate::depth::RawDepthMap;
use crate::error::{Error, FormatError, Result};
use crate::flowviz::{FlowImage, GrayImage};

fn describe(color: ColorType, depth: BitDepth) -> String {
    let bits = depth as u8;
    let kind = match color {
        ColorType::Grayscale => "grayscale",
        ColorType::GrayscaleAlpha => "grayscale+alpha",
        ColorType::Rgb => "RGB",
        ColorType::Rgba => "RGBA",
        ColorType::Indexed => "indexed",
    };
    format!("{bits}-bit {kind}")
}

struct Decoded {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

fn decode(bytes: &[u8], color: ColorType, depth: BitDepth) -> Result<Decoded, FormatError> {
    let mut decoder = Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(Transformations::IDENTITY);
    let mut reader = decoder
        .read_info()
        .map_err(|e| FormatError::Png(e.to_string()))?;
    let info = reader.info();
    if info.color_type != color || info.bit_depth != depth {
        return Err(FormatError::UnexpectedLayout {
            expected: describe(color, depth),
            found: describe(info.color_type, info.bit_depth),
        });
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| FormatError::Png("image too large".into()))?;
    let mut data = vec![0; size];
    let frame = reader
        .next_frame(&mut data)
        .map_err(|e| FormatError::Png(e.to_string()))?;
    data.truncate(frame.buffer_size());
    Ok(Decoded {
        width: frame.width as usize,
        height: frame.height as usize,
        data,
    })
}

fn encode(
    width: usize,
    height: usize,
    color: ColorType,
    depth: BitDepth,
    data: &[u8],
) -> Result<Vec<u8>> {
    let too_big = || Error::InvalidInput(format!("{width}x{height} image too large for PNG"));
    let w = u32::try_from(width).map_err(|_| too_big())?;
    let h = u32::try_from(height).map_err(|_| too_big())?;
    let mut out = Vec::new();
    let mut encoder = Encoder::new(&mut out, w, h);
    encoder.set_color(color);
    encoder.set_depth(depth);
    let result = encoder.write_header().and_then(|mut writer| {
        writer.write_image_data(data)?;
        writer.finish()
    });
    result.map_err(|e| Error::InvalidInput(format!("PNG encoding failed: {e}")))?;
    Ok(out)
}

/// Decodes a single-channel 16-bit PNG; a sample `k` becomes `k / 65535`.
pub fn decode_depth_png16(bytes: &[u8]) -> Result<RawDepthMap, FormatError> {
    let img = decode(bytes, ColorType::Grayscale, BitDepth::Sixteen)?;
    let values = img
        .data
        .chunks_exact(2)
        .map(|b| f64::from(u16::from_be_bytes([b[0], b[1]])) / 65535.0)
        .collect();
    RawDepthMap::new(img.width, img.height, values)
        .map_err(|e| FormatError::BadHeader(e.to_string()))
}

pub fn read_depth_png16(path: &Path) -> Result<RawDepthMap> {
    let bytes = read_bytes(path)?;
    decode_depth_png16(&bytes).map_err(|kind| Error::format(path, kind))
}

/// Encodes raw 16-bit samples as a single-channel PNG.
pub fn encode_depth_png16(width: usize, height: usize, samples: &[u16]) -> Result<Vec<u8>> {
    if samples.len() != width * height {
        return Err(Error::InvalidInput(format!(
            "{width}x{height} depth needs {} samples, got {}",
            width * height,
            samples.len()
        )));
    }
    let data: Vec<u8> = samples.iter().flat_map(|s| s.to_be_bytes()).collect();
    encode(
        width,
        height,
        ColorType::Grayscale,
        BitDepth::Sixteen,
        &data,
    )
}

pub fn write_depth_png16(path: &Path, width: usize, height: usize, samples: &[u16]) -> Result<()> {
    write_bytes(path, &encode_depth_png16(width, height, samples)?)
}

pub fn encode_png_rgb(img: &FlowImage) -> Result<Vec<u8>> {
    encode(
        img.width(),
        img.height(),
        ColorType::Rgb,
        BitDepth::Eight,
        img.as_bytes(),
    )
}

pub fn write_png_rgb(img: &FlowImage, path: &Path) -> Result<()> {
    write_bytes(path, &encode_png_rgb(img)?)
}

pub fn decode_png_rgb(bytes: &[u8]) -> Result<FlowImage, FormatError> {
    let img = decode(bytes, ColorType::Rgb, BitDepth::Eight)?;
    FlowImage::new(img.width, img.height, img.data)
        .map_err(|e| FormatError::BadHeader(e.to_string()))
}

pub fn read_png_rgb(path: &Path) -> Result<FlowImage> {
    let bytes = read_bytes(path)?;
    decode_png_rgb(&bytes).map_err(|kind| Error::format(path, kind))
}

pub fn encode_png_gray(img: &GrayImage) -> Result<Vec<u8>> {
    encode(
        img.width(),
        img.height(),
        ColorType::Grayscale,
        BitDepth::Eight,
        img.as_bytes(),
    )
}

pub fn write_png_gray(img: &GrayImage, path: &Path) -> Result<()> {
    write_bytes(path, &encode_png_gray(img)?)
}
