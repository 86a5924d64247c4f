use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Everything needed to build a dataset from paired image and depth folders.
///
/// In video mode `images_dir` holds the extracted frames, either directly or
/// in one subdirectory per sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetConfig {
    pub images_dir: PathBuf,
    pub depths_dir: PathBuf,
    pub output_dir: PathBuf,
    pub global_seed: u64,
    pub emit_flo: bool,
    pub emit_png: bool,
    pub shared_reverse: bool,
    pub jobs: usize,
    /// Augmentation draws per input; above 1 the sample id gets a `_v<i>` suffix.
    pub variants: usize,
}

impl DatasetConfig {
    pub fn new(
        images_dir: impl Into<PathBuf>,
        depths_dir: impl Into<PathBuf>,
        output_dir: impl Into<PathBuf>,
    ) -> Self {
        Self {
            images_dir: images_dir.into(),
            depths_dir: depths_dir.into(),
            output_dir: output_dir.into(),
            global_seed: 0,
            emit_flo: false,
            emit_png: true,
            shared_reverse: false,
            jobs: 1,
            variants: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.emit_flo && !self.emit_png {
            return Err(Error::Config(
                "nothing to write: both PNG and .flo output are disabled".into(),
            ));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if self.variants == 0 {
            return Err(Error::Config("variants must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn snapshot(&self, mode: RunMode) -> ConfigSnapshot {
        ConfigSnapshot {
            mode,
            images_dir: self.images_dir.clone(),
            depths_dir: self.depths_dir.clone(),
            global_seed: self.global_seed,
            emit_flo: self.emit_flo,
            emit_png: self.emit_png,
            shared_reverse: self.shared_reverse,
            variants: self.variants,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Dataset,
    Video,
}

/// The part of [`DatasetConfig`] that determines output content.
///
/// The output directory and worker count are left out: the manifest lives in
/// the former and the latter must not change any output byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub mode: RunMode,
    pub images_dir: PathBuf,
    pub depths_dir: PathBuf,
    pub global_seed: u64,
    pub emit_flo: bool,
    pub emit_png: bool,
    pub shared_reverse: bool,
    pub variants: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut c = DatasetConfig::new("i", "d", "o");
        assert!(c.validate().is_ok());
        c.emit_png = false;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.emit_flo = true;
        c.jobs = 0;
        assert!(c.validate().is_err());
        c.jobs = 2;
        c.variants = 0;
        assert!(c.validate().is_err());
    }
}
