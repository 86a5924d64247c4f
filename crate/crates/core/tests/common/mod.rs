#![allow(dead_code)]

use std::path::Path;

use fakeflow::augment::SplitMix64;
use fakeflow::flowio::write_depth_png16;

/// Smooth synthetic depth: a tilted plane plus a bump whose position depends on `k`.
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

/// Writes `n` image placeholders and matching 16-bit depth PNGs.
pub fn make_fixture(root: &Path, n: usize, width: usize, height: usize) {
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
}

/// Every file under `dir`, as sorted (relative path, bytes).
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
