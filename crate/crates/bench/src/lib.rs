//! Input generators shared by the benchmarks.

/// Raw depth for a `width` x `height` frame: a sloped floor with a round
/// object in front of it.
pub fn synthetic_depth(width: usize, height: usize) -> Vec<f64> {
    let (cx, cy) = (width as f64 * 0.4, height as f64 * 0.55);
    let radius = width.min(height) as f64 * 0.25;
    let mut out = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let floor = 2.0 + 8.0 * (1.0 - y as f64 / height as f64);
            let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
            out.push(if d < radius { 1.5 + d / radius } else { floor });
        }
    }
    out
}
