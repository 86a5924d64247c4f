//! Raw and normalized depth maps.

use crate::error::{Error, Result};

/// Depth as produced by an estimation model, in whatever units it uses.
///
/// Construction only checks the shape. Finiteness is checked by
/// [`normalize_depth`], which reports the first offending pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDepthMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl RawDepthMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        check_shape(width, height, values.len())?;
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Minimum and maximum over finite pixels, or `None` if there are none.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}

/// Per-pixel depth in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    width: usize,
    height: usize,
    values: Vec<f32>,
}

impl DepthMap {
    /// Builds a depth map from values that are already in `[0, 1]`.
    pub fn new(width: usize, height: usize, values: Vec<f32>) -> Result<Self> {
        check_shape(width, height, values.len())?;
        if let Some(index) = values.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidInput(format!(
                "depth value {} at pixel {index} is outside [0, 1]",
                values[index]
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    /// True when every pixel is zero, which is what a constant source collapses to.
    pub fn is_flat(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

pub(crate) fn check_shape(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    match width.checked_mul(height) {
        Some(n) if n == len => Ok(()),
        _ => Err(Error::InvalidInput(format!(
            "{width}x{height} map needs {} values, got {len}",
            width.saturating_mul(height)
        ))),
    }
}

/// Min-max normalizes a raw depth map into `[0, 1]`.
///
/// The arithmetic runs in `f64` and is cast afterwards, so the argmin and
/// argmax pixels land on exactly 0 and 1. A constant map has no range to
/// divide by and yields all zeros (with a warning).
pub fn normalize_depth(raw: &RawDepthMap) -> Result<DepthMap> {
    if let Some(index) = raw.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "non-finite depth value at pixel {index}"
        )));
    }
    let (min, max) = raw
        .range()
        .expect("shape check guarantees at least one pixel");
    let span = max - min;
    let values = if span > 0.0 {
        raw.values
            .iter()
            .map(|&v| ((v - min) / span) as f32)
            .collect()
    } else {
        log::warn!(
            "constant {}x{} depth map (value {min}); emitting all-zero depth",
            raw.width,
            raw.height
        );
        vec![0.0; raw.values.len()]
    };
    Ok(DepthMap {
        width: raw.width,
        height: raw.height,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(w: usize, h: usize, v: &[f64]) -> RawDepthMap {
        RawDepthMap::new(w, h, v.to_vec()).unwrap()
    }

    #[test]
    fn two_pixels_map_to_endpoints() {
        let d = normalize_depth(&raw(2, 1, &[3.0, 7.0])).unwrap();
        assert_eq!(d.values(), &[0.0, 1.0]);
    }

    #[test]
    fn quarter_steps() {
        let d = normalize_depth(&raw(2, 2, &[1.0, 2.0, 3.0, 5.0])).unwrap();
        assert_eq!(d.values(), &[0.0, 0.25, 0.5, 1.0]);
        assert_eq!((d.width(), d.height()), (2, 2));
    }

    #[test]
    fn constant_map_is_all_zero() {
        let d = normalize_depth(&raw(3, 1, &[4.0, 4.0, 4.0])).unwrap();
        assert_eq!(d.values(), &[0.0, 0.0, 0.0]);
        assert!(d.is_flat());
    }

    #[test]
    fn non_finite_names_pixel() {
        let r = raw(2, 2, &[0.0, 1.0, f64::NAN, f64::INFINITY]);
        let err = normalize_depth(&r).unwrap_err().to_string();
        assert!(err.contains("pixel 2"), "{err}");
    }

    #[test]
    fn shape_is_checked() {
        assert!(RawDepthMap::new(0, 1, vec![]).is_err());
        assert!(RawDepthMap::new(2, 2, vec![0.0; 3]).is_err());
        assert!(DepthMap::new(1, 1, vec![1.5]).is_err());
        assert!(DepthMap::new(1, 1, vec![f32::NAN]).is_err());
    }

    #[test]
    fn near_constant_input_keeps_exact_endpoints() {
        let base = 1.0e9;
        let d = normalize_depth(&raw(3, 1, &[base, base + 1e-6, base + 2e-6])).unwrap();
        assert_eq!(d.values()[0], 0.0);
        assert_eq!(d.values()[2], 1.0);
    }
}
