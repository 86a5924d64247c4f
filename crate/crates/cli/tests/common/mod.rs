#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fakeflow::augment::{Fnv1a64, SplitMix64};
use fakeflow::flowio::write_depth_png16;

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fakeflow"));
    c.env("RUST_LOG", "error");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn fakeflow")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn core_fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

pub fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Smooth synthetic depth: a tilted plane plus a bump placed by `k`.
pub fn synthetic_depth(width: usize, height: usize, k: u64) -> Vec<u16> {
    let mut rng = SplitMix64::new(k);
    let cx = rng.next_unit() * width as f64;
    let cy = rng.next_unit() * height as f64;
    let tilt = rng.next_unit();
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let dx = (x as f64 - cx) / width as f64;
            let dy = (y as f64 - cy) / height as f64;
            let bump = (-(dx * dx + dy * dy) * 8.0).exp();
            let plane = tilt * y as f64 / height as f64;
            let v = (0.6 * bump + 0.4 * plane).clamp(0.0, 1.0);
            out.push((v * 65535.0).round() as u16);
        }
    }
    out
}

/// `images/` with placeholder files and `depths/` with matching 16-bit PNGs.
pub fn make_fixture(root: &Path, n: usize, width: usize, height: usize) -> (PathBuf, PathBuf) {
    let images = root.join("images");
    let depths = root.join("depths");
    std::fs::create_dir_all(&images).unwrap();
    std::fs::create_dir_all(&depths).unwrap();
    for i in 0..n {
        let stem = format!("img_{i:05}");
        std::fs::write(images.join(format!("{stem}.jpg")), b"jpeg placeholder").unwrap();
        let d = synthetic_depth(width, height, i as u64);
        write_depth_png16(&depths.join(format!("{stem}.png")), width, height, &d).unwrap();
    }
    (images, depths)
}

/// Every file under `dir` as sorted (relative path, bytes).
pub fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(base: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(base, &p, out);
            } else {
                let rel = p.strip_prefix(base).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}

/// Manifest JSON with the creation timestamp removed.
pub fn manifest_without_time(dir: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(dir.join("manifest.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v.as_object_mut().unwrap().remove("created_at");
    v
}

/// FNV-1a over sorted (path, contents) of every file except the manifest,
/// followed by the timestamp-free manifest.
pub fn tree_checksum(dir: &Path) -> u64 {
    let mut h = Fnv1a64::new();
    for (path, bytes) in tree(dir) {
        if path == "manifest.json" {
            continue;
        }
        h.update(path.as_bytes());
        h.update(&[0]);
        h.update(&(bytes.len() as u64).to_le_bytes());
        h.update(&bytes);
    }
    h.update(manifest_without_time(dir).to_string().as_bytes());
    h.finish()
}
