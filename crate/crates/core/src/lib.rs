//! Simulated optical flow from single-image depth maps.
//!
//! A depth map is min-max normalized, copied onto two axes, and each axis is
//! randomly reversed, shifted and scaled. The resulting UV field is divided
//! by its largest norm and colorized with the standard flow color wheel.
//! The [`pipeline`] module runs this over whole image folders to build
//! reproducible image/flow training pairs.
//!
//! ```
//! use fakeflow::{depth_to_motion, normalize_depth, render_flow, sample_augmentation, RawDepthMap};
//!
//! let raw = RawDepthMap::new(2, 2, vec![1.0, 2.0, 3.0, 5.0]).unwrap();
//! let depth = normalize_depth(&raw).unwrap();
//! let motion = depth_to_motion(&depth, &sample_augmentation(7)).unwrap();
//! let rgb = render_flow(&motion).unwrap();
//! assert_eq!(rgb.as_bytes().len(), 2 * 2 * 3);
//! ```

pub mod augment;
pub mod depth;
pub mod error;
pub mod flowio;
pub mod flowviz;
pub mod motion;
pub mod pipeline;

pub use augment::{
    derive_sample_seed, fnv1a64, sample_augmentation, AugmentationParams, AxisParams, SampleSeed,
    SplitMix64,
};
pub use depth::{normalize_depth, DepthMap, RawDepthMap};
pub use error::{Error, FormatError, Result};
pub use flowviz::{
    build_color_wheel, flow_to_color, render_depth, render_flow, unit_normalize, ColorWheel,
    FlowImage, GrayImage,
};
pub use motion::{
    depth_to_motion, reverse_map, scale_map, shift_map, MotionChannel, MotionField, Stage,
};
pub use pipeline::{DatasetConfig, DatasetManifest, SampleRecord};
