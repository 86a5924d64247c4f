use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::flowio::DEPTH_EXTENSIONS;

/// Extensions recognised as source images or video frames.
pub const IMAGE_EXTENSIONS: [&str; 8] = ["jpg", "jpeg", "png", "bmp", "webp", "tif", "tiff", "gif"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePair {
    pub sample_id: String,
    pub image_path: PathBuf,
    pub depth_path: PathBuf,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairMatch {
    pub pairs: Vec<SamplePair>,
    pub unmatched_images: Vec<PathBuf>,
    pub unmatched_depths: Vec<PathBuf>,
    pub image_count: usize,
    pub depth_count: usize,
}

fn has_extension(path: &Path, allowed: &[&str]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| allowed.contains(&e.to_ascii_lowercase().as_str()))
        .unwrap_or(false)
}

/// Files in `dir` with one of `allowed` extensions, keyed by stem.
fn files_by_stem(dir: &Path, allowed: &[&str]) -> Result<BTreeMap<String, PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = BTreeMap::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if !path.is_file() || !has_extension(&path, allowed) {
            continue;
        }
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            log::warn!("skipping non UTF-8 file name {}", path.display());
            continue;
        };
        if stem.starts_with('.') || stem.is_empty() {
            continue;
        }
        if let Some(prev) = out.insert(stem.to_string(), path.clone()) {
            return Err(Error::Config(format!(
                "ambiguous stem {stem:?}: both {} and {}",
                prev.display(),
                path.display()
            )));
        }
    }
    Ok(out)
}

/// Matches without failing on an empty result.
pub(crate) fn match_in(images_dir: &Path, depths_dir: &Path, id_prefix: &str) -> Result<PairMatch> {
    let images = files_by_stem(images_dir, &IMAGE_EXTENSIONS)?;
    let mut depths = files_by_stem(depths_dir, &DEPTH_EXTENSIONS)?;
    let mut m = PairMatch {
        image_count: images.len(),
        depth_count: depths.len(),
        ..PairMatch::default()
    };
    for (stem, image_path) in images {
        match depths.remove(&stem) {
            Some(depth_path) => m.pairs.push(SamplePair {
                sample_id: format!("{id_prefix}{stem}"),
                image_path,
                depth_path,
            }),
            None => {
                log::warn!("no depth map for image {}", image_path.display());
                m.unmatched_images.push(image_path);
            }
        }
    }
    for depth_path in depths.into_values() {
        log::warn!("no image for depth map {}", depth_path.display());
        m.unmatched_depths.push(depth_path);
    }
    Ok(m)
}

/// Pairs images with depth maps by file stem (case-sensitive), sorted by
/// sample id. Leftovers on either side are logged and returned.
pub fn match_pairs(images_dir: &Path, depths_dir: &Path) -> Result<PairMatch> {
    let m = match_in(images_dir, depths_dir, "")?;
    if m.pairs.is_empty() {
        return Err(no_pairs(&m));
    }
    Ok(m)
}

pub(crate) fn no_pairs(m: &PairMatch) -> Error {
    Error::Config(format!(
        "no image/depth pairs matched ({} images, {} depth maps, 0 matched)",
        m.image_count, m.depth_count
    ))
}

/// Video layout: one subdirectory per sequence under `frames_dir`, mirrored
/// under `depths_dir`; or frames directly in `frames_dir`, in which case the
/// directory name is the sequence name. Sample ids are `<sequence>/<stem>`.
pub fn match_video_frames(frames_dir: &Path, depths_dir: &Path) -> Result<PairMatch> {
    let entries = std::fs::read_dir(frames_dir).map_err(|e| Error::io(frames_dir, e))?;
    let mut sequences = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(frames_dir, e))?;
        let path = entry.path();
        if path.is_dir() {
            if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
                if !name.starts_with('.') {
                    sequences.push(name.to_string());
                }
            }
        }
    }
    sequences.sort();

    let mut all = PairMatch::default();
    if sequences.is_empty() {
        let name = frames_dir
            .canonicalize()
            .ok()
            .and_then(|p| p.file_name().and_then(|n| n.to_str()).map(String::from))
            .unwrap_or_else(|| "sequence".to_string());
        all = match_in(frames_dir, depths_dir, &format!("{name}/"))?;
    } else {
        for seq in &sequences {
            let seq_depths = depths_dir.join(seq);
            if !seq_depths.is_dir() {
                log::warn!("no depth directory for sequence {seq}");
                let frames = files_by_stem(&frames_dir.join(seq), &IMAGE_EXTENSIONS)?;
                all.image_count += frames.len();
                all.unmatched_images.extend(frames.into_values());
                continue;
            }
            let m = match_in(&frames_dir.join(seq), &seq_depths, &format!("{seq}/"))?;
            all.image_count += m.image_count;
            all.depth_count += m.depth_count;
            all.pairs.extend(m.pairs);
            all.unmatched_images.extend(m.unmatched_images);
            all.unmatched_depths.extend(m.unmatched_depths);
        }
    }
    all.pairs.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    if all.pairs.is_empty() {
        return Err(no_pairs(&all));
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn touch(dir: &Path, names: &[&str]) {
        std::fs::create_dir_all(dir).unwrap();
        for n in names {
            std::fs::write(dir.join(n), b"x").unwrap();
        }
    }

    #[test]
    fn full_match_is_sorted() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("img"), &["b.jpg", "a.jpg"]);
        touch(&t.path().join("dep"), &["a.png", "b.png"]);
        let m = match_pairs(&t.path().join("img"), &t.path().join("dep")).unwrap();
        let ids: Vec<_> = m.pairs.iter().map(|p| p.sample_id.as_str()).collect();
        assert_eq!(ids, ["a", "b"]);
        assert_eq!(m.pairs[0].depth_path, t.path().join("dep/a.png"));
        assert!(m.unmatched_images.is_empty() && m.unmatched_depths.is_empty());
    }

    #[test]
    fn disjoint_stems_are_a_config_error() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("img"), &["a.jpg"]);
        touch(&t.path().join("dep"), &["b.png"]);
        let err = match_pairs(&t.path().join("img"), &t.path().join("dep")).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        assert!(
            err.to_string()
                .contains("1 images, 1 depth maps, 0 matched"),
            "{err}"
        );
    }

    #[test]
    fn partial_match_reports_leftovers() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("img"), &["a.jpg", "c.jpg", "notes.txt"]);
        touch(&t.path().join("dep"), &["a.png"]);
        let m = match_pairs(&t.path().join("img"), &t.path().join("dep")).unwrap();
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.unmatched_images, vec![t.path().join("img/c.jpg")]);
    }

    #[test]
    fn stems_are_case_sensitive() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("img"), &["A.jpg", "b.JPG"]);
        touch(&t.path().join("dep"), &["a.png", "b.pfm"]);
        let m = match_pairs(&t.path().join("img"), &t.path().join("dep")).unwrap();
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.pairs[0].sample_id, "b");
        assert_eq!(m.unmatched_images.len(), 1);
        assert_eq!(m.unmatched_depths.len(), 1);
    }

    #[test]
    fn ambiguous_stem_rejected() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("img"), &["a.jpg"]);
        touch(&t.path().join("dep"), &["a.png", "a.pfm"]);
        assert!(matches!(
            match_pairs(&t.path().join("img"), &t.path().join("dep")),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn video_sequences_prefix_ids() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("frames/cat"), &["00000.jpg", "00001.jpg"]);
        touch(&t.path().join("frames/dog"), &["00000.jpg"]);
        touch(&t.path().join("depths/cat"), &["00000.png", "00001.png"]);
        touch(&t.path().join("depths/dog"), &["00000.png"]);
        let m = match_video_frames(&t.path().join("frames"), &t.path().join("depths")).unwrap();
        let ids: Vec<_> = m.pairs.iter().map(|p| p.sample_id.as_str()).collect();
        assert_eq!(ids, ["cat/00000", "cat/00001", "dog/00000"]);
    }

    #[test]
    fn flat_video_dir_uses_dir_name() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("bear"), &["0.jpg"]);
        touch(&t.path().join("d"), &["0.png"]);
        let m = match_video_frames(&t.path().join("bear"), &t.path().join("d")).unwrap();
        assert_eq!(m.pairs[0].sample_id, "bear/0");
    }

    #[test]
    fn empty_frames_dir_is_config_error() {
        let t = tempfile::tempdir().unwrap();
        touch(&t.path().join("frames"), &[]);
        touch(&t.path().join("depths"), &[]);
        assert!(matches!(
            match_video_frames(&t.path().join("frames"), &t.path().join("depths")),
            Err(Error::Config(_))
        ));
    }
}
