//! Noise removal and binarization of the gray page into an ink mask.
//!
//! The Gaussian filter suppresses isolated specks before thresholding;
//! Otsu's method then separates dark handwriting from the light background
//! without any tuned parameter.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::num::round_clamp_u8;
use crate::raster::{GrayImage, InkMask};

/// Sigma must be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonPositiveSigma;

impl fmt::Display for NonPositiveSigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gaussian sigma must be > 0")
    }
}

impl core::error::Error for NonPositiveSigma {}

/// 1-D Gaussian kernel of radius `ceil(3 sigma)`, normalized to sum 1.
///
/// The kernel is symmetric and has `2 * radius + 1` taps; tap `i` (with the
/// center at index `radius`) is proportional to `exp(-i^2 / (2 sigma^2))`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>, NonPositiveSigma> {
    if !(sigma > 0.0) {
        return Err(NonPositiveSigma);
    }
    let radius = libm::ceil(3.0 * sigma) as i64;
    let mut weights: Vec<f64> = (-radius..=radius)
        .map(|i| libm::exp(-((i * i) as f64) / (2.0 * sigma * sigma)))
        .collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    Ok(weights)
}

/// Separable Gaussian blur: horizontal pass, then vertical pass.
///
/// Borders are handled by edge replication. Accumulation is in f64 end to
/// end; only the final output is rounded half-up and clamped to 0-255, so
/// the result matches a direct 2-D convolution up to the last rounding.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage, NonPositiveSigma> {
    let kernel = gaussian_kernel(sigma)?;
    let radius = (kernel.len() / 2) as i64;
    let (w, h) = (img.width() as i64, img.height() as i64);

    // Horizontal pass into an f64 buffer.
    let mut tmp = vec![0.0f64; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (t, &k) in kernel.iter().enumerate() {
                let sx = (x + t as i64 - radius).clamp(0, w - 1);
                acc += k * img.get(sx as u32, y as u32) as f64;
            }
            tmp[(y * w + x) as usize] = acc;
        }
    }

    // Vertical pass, rounding at the end.
    let mut out = vec![0u8; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (t, &k) in kernel.iter().enumerate() {
                let sy = (y + t as i64 - radius).clamp(0, h - 1);
                acc += k * tmp[(sy * w + x) as usize];
            }
            out[(y * w + x) as usize] = round_clamp_u8(acc);
        }
    }
    Ok(GrayImage::from_raw(img.width(), img.height(), out))
}

/// Between-class variance of the split `[0, t) | [t, 255]`, as an exact
/// integer pair `(a^2, b)` so the comparison `a0^2/b0 > a1^2/b1` is free of
/// accumulation-order effects. Returns `None` when either class is empty.
fn class_split(hist: &[u64; 256], total_count: u64, total_sum: u64, t: usize) -> Option<(f64, f64)> {
    let mut c0 = 0u64;
    let mut s0 = 0u64;
    for (i, &n) in hist.iter().enumerate().take(t) {
        c0 += n;
        s0 += i as u64 * n;
    }
    let c1 = total_count - c0;
    let s1 = total_sum - s0;
    if c0 == 0 || c1 == 0 {
        return None;
    }
    // a = s0*c1 - s1*c0 is exact in i128; the conversion to f64 happens on
    // the same integers whichever route computed them.
    let a = s0 as i128 * c1 as i128 - s1 as i128 * c0 as i128;
    let af = a as f64;
    Some((af * af, (c0 as f64) * (c1 as f64)))
}

/// Otsu threshold over the 256-bin histogram, ties broken toward lower `t`.
///
/// Returns the threshold `t` such that ink is `intensity < t`, or `None`
/// when the histogram has a single occupied bin.
pub fn otsu_threshold(img: &GrayImage) -> Option<u8> {
    let mut hist = [0u64; 256];
    for &v in img.data() {
        hist[v as usize] += 1;
    }
    if hist.iter().filter(|&&n| n > 0).count() <= 1 {
        return None;
    }
    let total_count = img.data().len() as u64;
    let total_sum: u64 = hist
        .iter()
        .enumerate()
        .map(|(i, &n)| i as u64 * n)
        .sum();

    let mut best_t = 0usize;
    let mut best: Option<(f64, f64)> = None;
    for t in 1..=255 {
        if let Some((num, den)) = class_split(&hist, total_count, total_sum, t) {
            let better = match best {
                None => true,
                // num/den > bnum/bden without division
                Some((bnum, bden)) => num * bden > bnum * den,
            };
            if better {
                best = Some((num, den));
                best_t = t;
            }
        }
    }
    Some(best_t as u8)
}

/// Binarize with Otsu's global threshold; ink is darker than the threshold.
///
/// A constant image yields an all-background mask.
pub fn binarize_otsu(img: &GrayImage) -> InkMask {
    match otsu_threshold(img) {
        Some(t) => binarize_fixed(img, t),
        None => InkMask::new(img.width(), img.height()),
    }
}

/// Binarize against a fixed threshold: ink is `intensity < t`.
pub fn binarize_fixed(img: &GrayImage, t: u8) -> InkMask {
    let data = img.data().iter().map(|&v| v < t).collect();
    InkMask::from_raw(img.width(), img.height(), data)
}
