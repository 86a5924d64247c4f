//! Depth-to-motion conversion: value reversal, shift and scale per axis.

use crate::augment::{check_epsilon, check_eta, AugmentationParams, AxisParams};
use crate::depth::{check_shape, DepthMap};
use crate::error::{Error, Result};

/// Which step of the conversion produced a motion map.
///
/// Each stage carries a range invariant that constructors enforce.
/// `External` is for fields that did not come out of the conversion
/// (decoded `.flo` files, rescaled fields) and has no range constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Reversed,
    Shifted,
    Scaled,
    UnitNormalized,
    External,
}

/// Slack on the unit-norm bound for `f32` rounding of normalized components.
pub const UNIT_NORM_SLACK: f64 = 1e-6;

impl Stage {
    fn bound(self) -> Option<f32> {
        match self {
            Stage::Reversed => Some(1.0),
            Stage::Shifted | Stage::Scaled => Some(2.0),
            Stage::UnitNormalized | Stage::External => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Reversed => "reversed",
            Stage::Shifted => "shifted",
            Stage::Scaled => "scaled",
            Stage::UnitNormalized => "unit-normalized",
            Stage::External => "external",
        }
    }
}

fn check_bound(stage: Stage, values: &[f32], what: &str) -> Result<()> {
    if let Some(b) = stage.bound() {
        if let Some(i) = values.iter().position(|v| !(-b..=b).contains(v)) {
            return Err(Error::InvalidInput(format!(
                "{what} value {} at pixel {i} violates the {} range [-{b}, {b}]",
                values[i],
                stage.name()
            )));
        }
    }
    Ok(())
}

/// One axis of a motion field.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionChannel {
    width: usize,
    height: usize,
    values: Vec<f32>,
    stage: Stage,
}

impl MotionChannel {
    pub fn new(width: usize, height: usize, values: Vec<f32>, stage: Stage) -> Result<Self> {
        check_shape(width, height, values.len())?;
        if stage == Stage::UnitNormalized {
            return Err(Error::InvalidArgument(
                "unit normalization applies to whole fields, not single channels".into(),
            ));
        }
        check_bound(stage, &values, "channel")?;
        Ok(Self {
            width,
            height,
            values,
            stage,
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

    pub fn stage(&self) -> Stage {
        self.stage
    }

    fn expect_stage(&self, want: Stage, op: &str) -> Result<()> {
        if self.stage == want {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "{op} expects a {} channel, got {}",
                want.name(),
                self.stage.name()
            )))
        }
    }
}

/// Two-channel per-pixel motion, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionField {
    width: usize,
    height: usize,
    u: Vec<f32>,
    v: Vec<f32>,
    stage: Stage,
}

impl MotionField {
    pub fn new(
        width: usize,
        height: usize,
        u: Vec<f32>,
        v: Vec<f32>,
        stage: Stage,
    ) -> Result<Self> {
        check_shape(width, height, u.len())?;
        check_shape(width, height, v.len())?;
        check_bound(stage, &u, "u")?;
        check_bound(stage, &v, "v")?;
        let field = Self {
            width,
            height,
            u,
            v,
            stage,
        };
        if stage == Stage::UnitNormalized {
            let n = field.max_norm();
            if n.is_nan() || n > 1.0 + UNIT_NORM_SLACK {
                return Err(Error::InvalidInput(format!(
                    "unit-normalized field has max norm {n}"
                )));
            }
        }
        Ok(field)
    }

    /// Field with the given stage, skipping the checks. Callers guarantee the invariant.
    pub(crate) fn from_parts(
        width: usize,
        height: usize,
        u: Vec<f32>,
        v: Vec<f32>,
        stage: Stage,
    ) -> Self {
        debug_assert_eq!(u.len(), width * height);
        debug_assert_eq!(v.len(), width * height);
        Self {
            width,
            height,
            u,
            v,
            stage,
        }
    }

    pub fn zeros(width: usize, height: usize, stage: Stage) -> Result<Self> {
        let n = width * height;
        Self::new(width, height, vec![0.0; n], vec![0.0; n], stage)
    }

    pub fn from_channels(u: MotionChannel, v: MotionChannel) -> Result<Self> {
        if (u.width, u.height) != (v.width, v.height) {
            return Err(Error::InvalidArgument(format!(
                "channel sizes differ: {}x{} vs {}x{}",
                u.width, u.height, v.width, v.height
            )));
        }
        if u.stage != v.stage {
            return Err(Error::InvalidArgument(format!(
                "channel stages differ: {} vs {}",
                u.stage.name(),
                v.stage.name()
            )));
        }
        Ok(Self {
            width: u.width,
            height: u.height,
            u: u.values,
            v: v.values,
            stage: u.stage,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn u(&self) -> &[f32] {
        &self.u
    }

    pub fn v(&self) -> &[f32] {
        &self.v
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `(u, v)` at pixel index `i`.
    pub fn get(&self, i: usize) -> (f32, f32) {
        (self.u[i], self.v[i])
    }

    /// Largest Euclidean norm over all pixels, computed in `f64`.
    /// Non-finite pixels are skipped.
    pub fn max_norm(&self) -> f64 {
        self.u
            .iter()
            .zip(&self.v)
            .map(|(&u, &v)| norm(u, v))
            .filter(|n| n.is_finite())
            .fold(0.0, f64::max)
    }

    /// Every component multiplied by `k`. The result is tagged `External`.
    pub fn scaled_by(&self, k: f32) -> MotionField {
        MotionField {
            width: self.width,
            height: self.height,
            u: self.u.iter().map(|&x| x * k).collect(),
            v: self.v.iter().map(|&x| x * k).collect(),
            stage: Stage::External,
        }
    }

    /// Same values, relabelled as `External`.
    pub fn into_external(mut self) -> MotionField {
        self.stage = Stage::External;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|x| x.is_finite())
    }

    pub fn u_stats(&self) -> ChannelStats {
        ChannelStats::of(&self.u)
    }

    pub fn v_stats(&self) -> ChannelStats {
        ChannelStats::of(&self.v)
    }
}

pub(crate) fn norm(u: f32, v: f32) -> f64 {
    let (u, v) = (f64::from(u), f64::from(v));
    (u * u + v * v).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStats {
    pub min: f32,
    pub max: f32,
    pub mean: f64,
}

impl ChannelStats {
    pub fn of(values: &[f32]) -> Self {
        let mut min = f32::INFINITY;
        let mut max = f32::NEG_INFINITY;
        let mut sum = 0.0f64;
        for &x in values {
            min = min.min(x);
            max = max.max(x);
            sum += f64::from(x);
        }
        Self {
            min,
            max,
            mean: sum / values.len().max(1) as f64,
        }
    }
}

/// `2δ(1 − D) + 2(1 − δ)D − 1`: depth rescaled to `[-1, 1]`, flipped when `reverse` is set.
pub fn reverse_map(depth: &DepthMap, reverse: bool) -> MotionChannel {
    let delta: f32 = if reverse { 1.0 } else { 0.0 };
    let values = depth
        .values()
        .iter()
        .map(|&d| 2.0 * delta * (1.0 - d) + 2.0 * (1.0 - delta) * d - 1.0)
        .collect();
    MotionChannel {
        width: depth.width(),
        height: depth.height(),
        values,
        stage: Stage::Reversed,
    }
}

/// Adds `epsilon` to every pixel of a reversed channel.
pub fn shift_map(m: &MotionChannel, epsilon: f64) -> Result<MotionChannel> {
    m.expect_stage(Stage::Reversed, "shift_map")?;
    check_epsilon(epsilon)?;
    let e = epsilon as f32;
    Ok(MotionChannel {
        width: m.width,
        height: m.height,
        values: m.values.iter().map(|&x| x + e).collect(),
        stage: Stage::Shifted,
    })
}

/// Multiplies every pixel of a shifted channel by `eta`.
pub fn scale_map(m: &MotionChannel, eta: f64) -> Result<MotionChannel> {
    m.expect_stage(Stage::Shifted, "scale_map")?;
    check_eta(eta)?;
    let s = eta as f32;
    Ok(MotionChannel {
        width: m.width,
        height: m.height,
        values: m.values.iter().map(|&x| s * x).collect(),
        stage: Stage::Scaled,
    })
}

/// Every intermediate of one axis, for inspection.
#[derive(Debug, Clone)]
pub struct AxisStages {
    pub reversed: MotionChannel,
    pub shifted: MotionChannel,
    pub scaled: MotionChannel,
}

pub fn axis_stages(depth: &DepthMap, p: &AxisParams) -> Result<AxisStages> {
    p.validate()?;
    let reversed = reverse_map(depth, p.delta == 1);
    let shifted = shift_map(&reversed, p.epsilon)?;
    let scaled = scale_map(&shifted, p.eta)?;
    Ok(AxisStages {
        reversed,
        shifted,
        scaled,
    })
}

/// The three intermediate motion fields of a conversion.
#[derive(Debug, Clone)]
pub struct ConversionStages {
    pub reversed: MotionField,
    pub shifted: MotionField,
    pub scaled: MotionField,
}

pub fn conversion_stages(
    depth: &DepthMap,
    params: &AugmentationParams,
) -> Result<ConversionStages> {
    let x = axis_stages(depth, &params.x)?;
    let y = axis_stages(depth, &params.y)?;
    Ok(ConversionStages {
        reversed: MotionField::from_channels(x.reversed, y.reversed)?,
        shifted: MotionField::from_channels(x.shifted, y.shifted)?,
        scaled: MotionField::from_channels(x.scaled, y.scaled)?,
    })
}

/// Converts a normalized depth map into a scaled two-channel motion field,
/// applying the x parameters to `u` and the y parameters to `v`.
pub fn depth_to_motion(depth: &DepthMap, params: &AugmentationParams) -> Result<MotionField> {
    params.validate()?;
    let u = axis_stages(depth, &params.x)?.scaled;
    let v = axis_stages(depth, &params.y)?.scaled;
    MotionField::from_channels(u, v)
}
