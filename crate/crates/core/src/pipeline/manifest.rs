use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::config::ConfigSnapshot;
use crate::augment::AugmentationParams;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

pub fn tool_version() -> String {
    format!("fakeflow {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleError {
    pub class: String,
    pub message: String,
}

/// Outcome of one sample. Output paths are relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub sample_id: String,
    pub image_path: PathBuf,
    pub depth_path: PathBuf,
    pub seed: u64,
    pub params: AugmentationParams,
    pub flow_png_path: Option<PathBuf>,
    pub flo_path: Option<PathBuf>,
    pub degenerate: bool,
    /// FNV-1a 64 over every written byte (PNG first, then `.flo`), as hex.
    pub checksum: Option<String>,
    pub error: Option<SampleError>,
}

impl SampleRecord {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub tool_version: String,
    pub created_at: DateTime<Utc>,
    pub config: ConfigSnapshot,
    pub records: Vec<SampleRecord>,
    pub unmatched_images: Vec<PathBuf>,
    pub unmatched_depths: Vec<PathBuf>,
}

impl DatasetManifest {
    pub fn succeeded(&self) -> usize {
        self.records.iter().filter(|r| r.succeeded()).count()
    }

    pub fn failed(&self) -> usize {
        self.records.len() - self.succeeded()
    }

    pub fn degenerate(&self) -> usize {
        self.records.iter().filter(|r| r.degenerate).count()
    }

    /// Failure counts keyed by error class.
    pub fn failure_classes(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for e in self.records.iter().filter_map(|r| r.error.as_ref()) {
            *out.entry(e.class.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, self.to_json()).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: invalid manifest: {e}", path.display())))
    }
}
