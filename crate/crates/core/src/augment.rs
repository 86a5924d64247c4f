//! Seeded randomness for the depth-to-motion augmentation.
//!
//! Everything here is part of the reproducibility contract: the hash used to
//! derive per-sample seeds, the generator, the draw order and the
//! integer-to-float conversion must not change between releases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Incremental FNV-1a, 64-bit.
#[derive(Debug, Clone, Copy)]
pub struct Fnv1a64(u64);

impl Default for Fnv1a64 {
    fn default() -> Self {
        Self(FNV_OFFSET)
    }
}

impl Fnv1a64 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    pub fn finish(self) -> u64 {
        self.0
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = Fnv1a64::new();
    h.update(bytes);
    h.finish()
}

/// SplitMix64 (Steele, Lea and Flood).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Identifies one sample for seeding purposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSeed<'a> {
    pub global_seed: u64,
    pub sample_id: &'a str,
}

impl<'a> SampleSeed<'a> {
    pub fn new(global_seed: u64, sample_id: &'a str) -> Self {
        Self {
            global_seed,
            sample_id,
        }
    }
}

/// FNV-1a over the little-endian global seed followed by the UTF-8 sample id.
pub fn derive_sample_seed(seed: &SampleSeed<'_>) -> Result<u64> {
    if seed.sample_id.is_empty() {
        return Err(Error::InvalidArgument("sample id must not be empty".into()));
    }
    let mut h = Fnv1a64::new();
    h.update(&seed.global_seed.to_le_bytes());
    h.update(seed.sample_id.as_bytes());
    Ok(h.finish())
}

/// Random draws for one axis: value reversal, additive shift, multiplicative scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisParams {
    pub delta: u8,
    pub epsilon: f64,
    pub eta: f64,
}

impl AxisParams {
    pub fn new(delta: u8, epsilon: f64, eta: f64) -> Result<Self> {
        let p = Self {
            delta,
            epsilon,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    /// The no-op draw: no reversal, no shift, unit scale.
    pub const IDENTITY: AxisParams = AxisParams {
        delta: 0,
        epsilon: 0.0,
        eta: 1.0,
    };

    pub fn validate(&self) -> Result<()> {
        if self.delta > 1 {
            return Err(Error::InvalidArgument(format!(
                "delta must be 0 or 1, got {}",
                self.delta
            )));
        }
        check_epsilon(self.epsilon)?;
        check_eta(self.eta)
    }

    fn draw(rng: &mut SplitMix64) -> Self {
        let delta = (rng.next_u64() & 1) as u8;
        let epsilon = 2.0 * rng.next_unit() - 1.0;
        let eta = rng.next_unit();
        Self {
            delta,
            epsilon,
            eta,
        }
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "shift epsilon must be in [-1, 1], got {epsilon}"
        )))
    }
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "scale eta must be in [0, 1], got {eta}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentationParams {
    pub x: AxisParams,
    pub y: AxisParams,
}

impl AugmentationParams {
    pub const IDENTITY: AugmentationParams = AugmentationParams {
        x: AxisParams::IDENTITY,
        y: AxisParams::IDENTITY,
    };

    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()
    }

    /// Copies the x-axis reversal flag onto the y axis.
    ///
    /// All six values are still drawn, so the shifts and scales are the same
    /// as in the independent mode.
    pub fn with_shared_reverse(mut self) -> Self {
        self.y.delta = self.x.delta;
        self
    }
}

/// Draws x.delta, x.epsilon, x.eta, y.delta, y.epsilon, y.eta in that order
/// from a SplitMix64 stream seeded with `seed`.
pub fn sample_augmentation(seed: u64) -> AugmentationParams {
    let mut rng = SplitMix64::new(seed);
    let x = AxisParams::draw(&mut rng);
    let y = AxisParams::draw(&mut rng);
    AugmentationParams { x, y }
}
