//! Flow colorization with the standard optical-flow color wheel.
//!
//! Direction selects the hue, magnitude fades from white at zero motion to
//! the full wheel color at unit magnitude. The arithmetic (angle convention,
//! interpolation, `floor(255 * c)` quantization) follows the widely used
//! Middlebury colorizer so outputs can be compared pixel for pixel.

use std::f64::consts::PI;

use crate::depth::DepthMap;
use crate::error::{Error, Result};
use crate::motion::{norm, MotionField, Stage};

/// Hue segment lengths: red-yellow, yellow-green, green-cyan, cyan-blue,
/// blue-magenta, magenta-red.
pub const WHEEL_SEGMENTS: [usize; 6] = [15, 6, 4, 11, 13, 6];
pub const WHEEL_LEN: usize = 55;

/// Fields whose largest norm falls below this are treated as zero motion.
pub const DEGENERATE_NORM: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorWheel {
    colors: Vec<[u8; 3]>,
}

impl ColorWheel {
    pub fn colors(&self) -> &[[u8; 3]] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Linear interpolation between adjacent entries at fractional index
    /// `fk` in `[0, len - 1]`, wrapping the last entry back to the first.
    /// Channels are returned in `[0, 1]`.
    pub fn sample(&self, fk: f64) -> [f64; 3] {
        let n = self.colors.len();
        let k0 = fk.floor() as usize;
        let k1 = if k0 + 1 == n { 0 } else { k0 + 1 };
        let f = fk - k0 as f64;
        let (c0, c1) = (self.colors[k0], self.colors[k1]);
        std::array::from_fn(|i| {
            let col0 = f64::from(c0[i]) / 255.0;
            let col1 = f64::from(c1[i]) / 255.0;
            (1.0 - f) * col0 + f * col1
        })
    }
}

pub fn build_color_wheel() -> ColorWheel {
    let [ry, yg, gc, cb, bm, mr] = WHEEL_SEGMENTS;
    let ramp = |i: usize, n: usize| (255 * i / n) as u8;
    let mut colors = Vec::with_capacity(WHEEL_LEN);
    colors.extend((0..ry).map(|i| [255, ramp(i, ry), 0]));
    colors.extend((0..yg).map(|i| [255 - ramp(i, yg), 255, 0]));
    colors.extend((0..gc).map(|i| [0, 255, ramp(i, gc)]));
    colors.extend((0..cb).map(|i| [0, 255 - ramp(i, cb), 255]));
    colors.extend((0..bm).map(|i| [ramp(i, bm), 0, 255]));
    colors.extend((0..mr).map(|i| [255, 0, 255 - ramp(i, mr)]));
    debug_assert_eq!(colors.len(), WHEEL_LEN);
    ColorWheel { colors }
}

/// An 8-bit RGB image, row-major, interleaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl FlowImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height * 3 {
            return Err(Error::InvalidInput(format!(
                "{width}x{height} RGB image needs {} bytes, got {}",
                width * height * 3,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, i: usize) -> [u8; 3] {
        [self.data[3 * i], self.data[3 * i + 1], self.data[3 * i + 2]]
    }
}

/// An 8-bit single-channel image, used for depth previews.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "{width}x{height} gray image needs {} bytes, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }
}

#[derive(Debug, Clone)]
pub struct UnitNormalized {
    pub field: MotionField,
    /// Norm the input was divided by (0 for degenerate fields).
    pub max_norm: f64,
    /// Set when the input had no measurable motion and was replaced by zeros.
    pub degenerate: bool,
}

/// Divides every pixel by the field's largest Euclidean norm.
pub fn unit_normalize(m: &MotionField) -> Result<UnitNormalized> {
    if !m.is_finite() {
        return Err(Error::InvalidInput(
            "cannot normalize a motion field with non-finite values".into(),
        ));
    }
    let max_norm = m.max_norm();
    if max_norm < DEGENERATE_NORM {
        return Ok(UnitNormalized {
            field: MotionField::from_parts(
                m.width(),
                m.height(),
                vec![0.0; m.len()],
                vec![0.0; m.len()],
                Stage::UnitNormalized,
            ),
            max_norm: 0.0,
            degenerate: true,
        });
    }
    let (u, v): (Vec<f32>, Vec<f32>) = m
        .u()
        .iter()
        .zip(m.v())
        .map(|(&u, &v)| {
            let mut u = (f64::from(u) / max_norm) as f32;
            let mut v = (f64::from(v) / max_norm) as f32;
            // Rounding to f32 can leave the largest vectors a hair past 1.
            while norm(u, v) > 1.0 {
                u = toward_zero(u);
                v = toward_zero(v);
            }
            (u, v)
        })
        .unzip();
    let field = MotionField::from_parts(m.width(), m.height(), u, v, Stage::UnitNormalized);
    Ok(UnitNormalized {
        field,
        max_norm,
        degenerate: false,
    })
}

fn toward_zero(x: f32) -> f32 {
    if x > 0.0 {
        x.next_down()
    } else if x < 0.0 {
        x.next_up()
    } else {
        x
    }
}

/// Color of a single `(u, v)` vector. Radii above 1 are darkened to 75%.
pub fn colorize(u: f32, v: f32, wheel: &ColorWheel) -> [u8; 3] {
    let rad = norm(u, v);
    let (u, v) = (f64::from(u), f64::from(v));
    let a = (-v).atan2(-u) / PI;
    let fk = (a + 1.0) / 2.0 * (wheel.len() - 1) as f64;
    let base = wheel.sample(fk);
    base.map(|col| {
        let col = if rad <= 1.0 {
            1.0 - rad * (1.0 - col)
        } else {
            col * 0.75
        };
        (255.0 * col).floor() as u8
    })
}

/// Maps each pixel's motion vector to an RGB color.
pub fn flow_to_color(m: &MotionField, wheel: &ColorWheel) -> Result<FlowImage> {
    if let Some(i) = (0..m.len()).find(|&i| {
        let (u, v) = m.get(i);
        u.is_nan() || v.is_nan()
    }) {
        return Err(Error::InvalidInput(format!("NaN motion at pixel {i}")));
    }
    let mut data = Vec::with_capacity(m.len() * 3);
    for (&u, &v) in m.u().iter().zip(m.v()) {
        data.extend_from_slice(&colorize(u, v, wheel));
    }
    FlowImage::new(m.width(), m.height(), data)
}

/// Max-norm normalization followed by colorization. Zero fields render white.
pub fn render_flow(m: &MotionField) -> Result<FlowImage> {
    render_flow_with(m, &build_color_wheel())
}

pub fn render_flow_with(m: &MotionField, wheel: &ColorWheel) -> Result<FlowImage> {
    let normalized = unit_normalize(m)?;
    flow_to_color(&normalized.field, wheel)
}

/// Largest norm a scaled field can reach, `|(2, 2)|`.
pub const STAGE_NORM: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Colorizes an intermediate stage on a fixed scale so that stages stay
/// comparable with each other (a per-image max-norm would hide the effect
/// of the scale step).
pub fn render_stage(m: &MotionField, wheel: &ColorWheel) -> Result<FlowImage> {
    let fixed = |x: &f32| (f64::from(*x) / STAGE_NORM) as f32;
    let scaled = MotionField::new(
        m.width(),
        m.height(),
        m.u().iter().map(fixed).collect(),
        m.v().iter().map(fixed).collect(),
        Stage::External,
    )?;
    flow_to_color(&scaled, wheel)
}

/// Grayscale preview of a normalized depth map, `round(255 * d)`.
pub fn render_depth(d: &DepthMap) -> GrayImage {
    let data = d
        .values()
        .iter()
        .map(|&v| (255.0 * v).round() as u8)
        .collect();
    GrayImage {
        width: d.width(),
        height: d.height(),
        data,
    }
}
