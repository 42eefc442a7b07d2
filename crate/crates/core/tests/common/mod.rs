#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uwsynth_core::ImageRgb8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent uniform bytes in every channel.
pub fn noise_image(w: usize, h: usize, seed: u64) -> ImageRgb8 {
    let mut r = rng(seed);
    ImageRgb8::from_fn(w, h, |_, _| r.random()).unwrap()
}

/// Smooth colored gradients with mild texture, loosely scene-like.
pub fn scene_image(w: usize, h: usize, seed: u64) -> ImageRgb8 {
    let mut r = rng(seed);
    let phase: f64 = r.random::<f64>() * 6.0;
    ImageRgb8::from_fn(w, h, |x, y| {
        let u = x as f64 / w as f64;
        let v = y as f64 / h as f64;
        let jitter: f64 = r.random_range(-12.0..12.0);
        let red = 128.0 + 100.0 * (6.0 * u + phase).sin() + jitter;
        let green = 110.0 + 90.0 * (5.0 * v - phase).cos() + jitter;
        let blue = 90.0 + 80.0 * (4.0 * (u + v) + phase).sin() + jitter;
        [red, green, blue].map(|c| c.round().clamp(0.0, 255.0) as u8)
    })
    .unwrap()
}

/// Laplacian variance of the luma plane over interior pixels.
pub fn laplacian_variance(img: &ImageRgb8) -> f64 {
    let (w, h) = (img.width(), img.height());
    let luma = img.luma();
    let mut vals = Vec::new();
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let c = luma[y * w + x];
            let lap = luma[y * w + x - 1] + luma[y * w + x + 1] + luma[(y - 1) * w + x]
                + luma[(y + 1) * w + x]
                - 4.0 * c;
            vals.push(lap);
        }
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

pub fn channel_means(img: &ImageRgb8) -> [f64; 3] {
    let mut s = [0.0; 3];
    for p in img.pixels() {
        for c in 0..3 {
            s[c] += p[c] as f64;
        }
    }
    s.map(|v| v / img.len() as f64)
}

/// Prints one pass/fail line per criterion, then fails the test if needed.
pub fn verdict(id: &str, title: &str, ok: bool, detail: &str) {
    println!("[{}] {id} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} {title} failed: {detail}");
}
