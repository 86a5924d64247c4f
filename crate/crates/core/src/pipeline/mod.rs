//! Dataset construction: pair inputs, simulate one flow per sample in
//! parallel, write outputs and a JSON manifest.
//!
//! Output layout under the output directory:
//!
//! ```text
//! flow_png/<sample_id>.png
//! flo/<sample_id>.flo
//! manifest.json
//! ```
//!
//! No output byte depends on the worker count or on scheduling. Manifest
//! records are ordered by sample id.

mod config;
mod manifest;
mod pairs;

use std::path::{Path, PathBuf};

use rayon::prelude::*;

pub use self::config::{ConfigSnapshot, DatasetConfig, RunMode};
pub use self::manifest::{tool_version, DatasetManifest, SampleError, SampleRecord, MANIFEST_FILE};
pub use self::pairs::{match_pairs, match_video_frames, PairMatch, SamplePair, IMAGE_EXTENSIONS};

use crate::augment::{
    derive_sample_seed, sample_augmentation, AugmentationParams, Fnv1a64, SampleSeed,
};
use crate::depth::{normalize_depth, DepthMap};
use crate::error::{Error, Result};
use crate::flowio::{encode_flo, encode_png_rgb, read_depth};
use crate::flowviz::{build_color_wheel, flow_to_color, unit_normalize, ColorWheel, FlowImage};
use crate::motion::{depth_to_motion, MotionField, Stage};

pub const FLOW_PNG_DIR: &str = "flow_png";
pub const FLO_DIR: &str = "flo";

/// A simulated flow for one depth map.
#[derive(Debug, Clone)]
pub struct SimulatedFlow {
    pub motion: MotionField,
    pub image: FlowImage,
    /// No usable motion: constant depth or a zero scale on both axes.
    pub degenerate: bool,
}

/// Depth to colorized flow. A constant depth map carries no motion, so it
/// yields a zero field rather than the uniform drift the shift step would add.
pub fn simulate_flow(
    depth: &DepthMap,
    params: &AugmentationParams,
    wheel: &ColorWheel,
) -> Result<SimulatedFlow> {
    let motion = if depth.is_flat() {
        MotionField::zeros(depth.width(), depth.height(), Stage::Scaled)?
    } else {
        depth_to_motion(depth, params)?
    };
    let normalized = unit_normalize(&motion)?;
    let image = flow_to_color(&normalized.field, wheel)?;
    Ok(SimulatedFlow {
        degenerate: normalized.degenerate,
        motion,
        image,
    })
}

/// Augmentation draws for a sample id under `config`.
pub fn sample_params(config: &DatasetConfig, sample_id: &str) -> Result<(u64, AugmentationParams)> {
    let seed = derive_sample_seed(&SampleSeed::new(config.global_seed, sample_id))?;
    let mut params = sample_augmentation(seed);
    if config.shared_reverse {
        params = params.with_shared_reverse();
    }
    Ok((seed, params))
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) => std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)),
        None => Ok(()),
    }
}

struct Written {
    flow_png_path: Option<PathBuf>,
    flo_path: Option<PathBuf>,
    degenerate: bool,
    checksum: u64,
}

fn write_outputs(
    pair: &SamplePair,
    params: &AugmentationParams,
    config: &DatasetConfig,
    wheel: &ColorWheel,
) -> Result<Written> {
    let raw = read_depth(&pair.depth_path)?;
    let depth = normalize_depth(&raw)?;
    let flow = simulate_flow(&depth, params, wheel)?;

    let mut hash = Fnv1a64::new();
    let mut put = |rel: PathBuf, bytes: Vec<u8>| -> Result<PathBuf> {
        let path = config.output_dir.join(&rel);
        ensure_parent(&path)?;
        std::fs::write(&path, &bytes).map_err(|e| Error::io(&path, e))?;
        hash.update(&bytes);
        Ok(rel)
    };
    let flow_png_path = if config.emit_png {
        let rel = Path::new(FLOW_PNG_DIR).join(format!("{}.png", pair.sample_id));
        Some(put(rel, encode_png_rgb(&flow.image)?)?)
    } else {
        None
    };
    let flo_path = if config.emit_flo {
        let rel = Path::new(FLO_DIR).join(format!("{}.flo", pair.sample_id));
        Some(put(rel, encode_flo(&flow.motion)?)?)
    } else {
        None
    };
    Ok(Written {
        flow_png_path,
        flo_path,
        degenerate: flow.degenerate,
        checksum: hash.finish(),
    })
}

/// Runs the full chain for one sample. Failures are captured in the record.
pub fn generate_sample(
    pair: &SamplePair,
    config: &DatasetConfig,
    wheel: &ColorWheel,
) -> SampleRecord {
    let seeded = sample_params(config, &pair.sample_id);
    let (seed, params) = match &seeded {
        Ok(sp) => *sp,
        Err(_) => (0, AugmentationParams::IDENTITY),
    };
    let mut record = SampleRecord {
        sample_id: pair.sample_id.clone(),
        image_path: pair.image_path.clone(),
        depth_path: pair.depth_path.clone(),
        seed,
        params,
        flow_png_path: None,
        flo_path: None,
        degenerate: false,
        checksum: None,
        error: None,
    };
    match seeded.and_then(|(_, params)| write_outputs(pair, &params, config, wheel)) {
        Ok(w) => {
            record.flow_png_path = w.flow_png_path;
            record.flo_path = w.flo_path;
            record.degenerate = w.degenerate;
            record.checksum = Some(format!("{:016x}", w.checksum));
        }
        Err(e) => {
            log::warn!("sample {} failed: {e}", pair.sample_id);
            record.error = Some(SampleError {
                class: e.class().to_string(),
                message: e.to_string(),
            });
        }
    }
    record
}

fn expand_variants(pairs: Vec<SamplePair>, variants: usize) -> Vec<SamplePair> {
    if variants <= 1 {
        return pairs;
    }
    pairs
        .into_iter()
        .flat_map(|p| {
            (0..variants).map(move |v| SamplePair {
                sample_id: format!("{}_v{v}", p.sample_id),
                ..p.clone()
            })
        })
        .collect()
}

fn check_unique(pairs: &[SamplePair]) -> Result<()> {
    for w in pairs.windows(2) {
        if w[0].sample_id == w[1].sample_id {
            return Err(Error::Config(format!(
                "duplicate sample id {:?}",
                w[0].sample_id
            )));
        }
    }
    Ok(())
}

fn execute(config: &DatasetConfig, matched: PairMatch, mode: RunMode) -> Result<DatasetManifest> {
    let mut pairs = expand_variants(matched.pairs, config.variants);
    pairs.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    check_unique(&pairs)?;

    std::fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Pipeline(format!("cannot start worker pool: {e}")))?;
    let wheel = build_color_wheel();
    let records: Vec<SampleRecord> = pool.install(|| {
        pairs
            .par_iter()
            .map(|p| generate_sample(p, config, &wheel))
            .collect()
    });

    let manifest = DatasetManifest {
        tool_version: tool_version(),
        created_at: chrono::Utc::now(),
        config: config.snapshot(mode),
        records,
        unmatched_images: matched.unmatched_images,
        unmatched_depths: matched.unmatched_depths,
    };
    let failed = manifest.failed();
    if failed * 2 > manifest.records.len() {
        let classes: Vec<String> = manifest
            .failure_classes()
            .into_iter()
            .map(|(class, n)| format!("{class}: {n}"))
            .collect();
        return Err(Error::Pipeline(format!(
            "{failed} of {} samples failed ({})",
            manifest.records.len(),
            classes.join(", ")
        )));
    }
    manifest.write(&config.output_dir)?;
    Ok(manifest)
}

/// Builds an image/flow dataset from `images_dir` and `depths_dir`.
///
/// Fails outright on configuration problems or when more than half of the
/// samples fail; otherwise failed samples are listed in the manifest.
pub fn run_dataset(config: &DatasetConfig) -> Result<DatasetManifest> {
    config.validate()?;
    let matched = match_pairs(&config.images_dir, &config.depths_dir)?;
    execute(config, matched, RunMode::Dataset)
}

/// Like [`run_dataset`] for extracted video frames; `images_dir` is the
/// frames root and sample ids carry the sequence name.
pub fn simulate_video_flows(config: &DatasetConfig) -> Result<DatasetManifest> {
    config.validate()?;
    let matched = match_video_frames(&config.images_dir, &config.depths_dir)?;
    execute(config, matched, RunMode::Video)
}
