//! Exact squared Euclidean distance transform and its 0-255 gray mapping.
//!
//! Distances are stored squared as integers, so the transform is exact: every
//! value is `dx*dx + dy*dy` for the offset to some nearest ink pixel. The
//! fast path is the separable two-phase algorithm (per-column 1-D distances,
//! then a per-row lower envelope of parabolas) computed entirely in integer
//! arithmetic; [`edt_bruteforce`] evaluates the defining minimum directly and
//! serves as the reference the fast path is verified against.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::num::round_clamp_u8;
use crate::raster::{GrayImage, InkMask};

/// Sentinel distance for pages with no ink at all. Exceeds any realizable
/// squared distance.
pub const NO_INK: u64 = u64::MAX;

/// Per-pixel squared Euclidean distance to the nearest ink pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMap {
    width: u32,
    height: u32,
    data: Vec<u64>,
}

impl DistanceMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u64 {
        self.data[y as usize * self.width as usize + x as usize]
    }
}

/// Direct evaluation of the minimum over all ink pixels.
///
/// Quadratic in the image size; kept as the reference implementation that
/// [`edt_exact`] must agree with exactly.
pub fn edt_bruteforce(mask: &InkMask) -> DistanceMap {
    let (w, h) = (mask.width(), mask.height());
    let ink: Vec<(i64, i64)> = mask
        .ink_pixels()
        .map(|(x, y)| (x as i64, y as i64))
        .collect();
    let mut data = vec![NO_INK; w as usize * h as usize];
    if ink.is_empty() {
        return DistanceMap {
            width: w,
            height: h,
            data,
        };
    }
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let mut best = u64::MAX;
            if mask.get(x as u32, y as u32) {
                best = 0;
            } else {
                for &(ix, iy) in &ink {
                    let d = ((x - ix) * (x - ix) + (y - iy) * (y - iy)) as u64;
                    if d < best {
                        best = d;
                    }
                }
            }
            data[(y * w as i64 + x) as usize] = best;
        }
    }
    DistanceMap {
        width: w,
        height: h,
        data,
    }
}

/// Exact squared EDT via the separable two-phase method.
///
/// Phase 1 finds, for every pixel, the vertical distance to the nearest ink
/// pixel in its own column (two linear scans per column). Phase 2 minimizes
/// `(x - i)^2 + g(i)^2` along each row with the integer lower-envelope
/// recurrence, so the result equals [`edt_bruteforce`] bit for bit.
pub fn edt_exact(mask: &InkMask) -> DistanceMap {
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    assert!(
        (w + 2 * h) < (1usize << 31),
        "image too large for u64 squared distances"
    );
    let mut data = vec![NO_INK; w * h];
    if mask.count_ink() == 0 {
        return DistanceMap {
            width: mask.width(),
            height: mask.height(),
            data,
        };
    }

    // Columns with no ink keep g >= big, which can never beat a parabola
    // rooted in a column that has ink: big^2 = (w+h)^2 exceeds the largest
    // realizable squared distance (w-1)^2 + (h-1)^2.
    let big = (w + h) as u64;
    let mut g = vec![0u64; w * h];
    for x in 0..w {
        g[x] = if mask.get(x as u32, 0) { 0 } else { big };
        for y in 1..h {
            g[y * w + x] = if mask.get(x as u32, y as u32) {
                0
            } else {
                g[(y - 1) * w + x] + 1
            };
        }
        for y in (0..h - 1).rev() {
            let below = g[(y + 1) * w + x];
            if below + 1 < g[y * w + x] {
                g[y * w + x] = below + 1;
            }
        }
    }

    // Row-wise lower envelope over parabolas i -> (x-i)^2 + g(i)^2.
    let f = |row: &[u64], x: usize, i: usize| -> u64 {
        let dx = x as i64 - i as i64;
        (dx * dx) as u64 + row[i] * row[i]
    };
    // Column index where the parabola at u starts to beat the one at i
    // (i < u). Non-negative at every call site, so plain integer division
    // is the floor.
    let sep = |row: &[u64], i: usize, u: usize| -> usize {
        let num = (u * u - i * i) as i128 + row[u] as i128 * row[u] as i128
            - row[i] as i128 * row[i] as i128;
        let den = (2 * (u - i)) as i128;
        num.div_euclid(den) as usize
    };

    let mut s = vec![0usize; w];
    let mut t = vec![0usize; w];
    for y in 0..h {
        let row = &g[y * w..(y + 1) * w];
        let mut q: isize = 0;
        s[0] = 0;
        t[0] = 0;
        for u in 1..w {
            while q >= 0 && f(row, t[q as usize], s[q as usize]) > f(row, t[q as usize], u) {
                q -= 1;
            }
            if q < 0 {
                q = 0;
                s[0] = u;
                t[0] = 0;
            } else {
                let start = 1 + sep(row, s[q as usize], u);
                if start < w {
                    q += 1;
                    s[q as usize] = u;
                    t[q as usize] = start;
                }
            }
        }
        for u in (0..w).rev() {
            data[y * w + u] = f(row, u, s[q as usize]);
            if u == t[q as usize] {
                q -= 1;
            }
        }
    }

    DistanceMap {
        width: mask.width(),
        height: mask.height(),
        data,
    }
}

/// How squared distances map onto the 0-255 intensity scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleMode {
    /// `g = round(255 * min(r, d_sat) / d_sat)`: the threshold alpha then
    /// acts as a fixed geometric dilation radius of `alpha * d_sat / 255`
    /// pixels, independent of page layout.
    FixedScale,
    /// `g = round(255 * r / r_max)` with `r_max` the page maximum, which
    /// makes the same alpha cover a page-dependent radius.
    MaxNormalize,
}

/// `d_sat` must be strictly positive in fixed-scale mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonPositiveSaturation;

impl fmt::Display for NonPositiveSaturation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "saturation distance must be > 0")
    }
}

impl core::error::Error for NonPositiveSaturation {}

/// Map a distance map to a gray image for thresholding.
///
/// `r` is the true (unsquared) distance in pixels. Pixels of an inkless page
/// ([`NO_INK`]) map to 255 in both modes; under max-normalize an all-ink
/// page (max distance 0) maps to all zeros.
pub fn distance_to_gray(
    dm: &DistanceMap,
    mode: ScaleMode,
    d_sat: f64,
) -> Result<GrayImage, NonPositiveSaturation> {
    let r_of = |d: u64| libm::sqrt(d as f64);
    let data: Vec<u8> = match mode {
        ScaleMode::FixedScale => {
            if !(d_sat > 0.0) {
                return Err(NonPositiveSaturation);
            }
            dm.data()
                .iter()
                .map(|&d| {
                    if d == NO_INK {
                        255
                    } else {
                        let r = r_of(d);
                        round_clamp_u8(255.0 * if r < d_sat { r } else { d_sat } / d_sat)
                    }
                })
                .collect()
        }
        ScaleMode::MaxNormalize => {
            let r_max = dm
                .data()
                .iter()
                .filter(|&&d| d != NO_INK)
                .map(|&d| r_of(d))
                .fold(0.0f64, f64::max);
            dm.data()
                .iter()
                .map(|&d| {
                    if d == NO_INK {
                        255
                    } else if r_max == 0.0 {
                        0
                    } else {
                        round_clamp_u8(255.0 * r_of(d) / r_max)
                    }
                })
                .collect()
        }
    };
    Ok(GrayImage::from_raw(dm.width(), dm.height(), data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn mask_from(w: u32, h: u32, bits: &[u8]) -> InkMask {
        InkMask::from_raw(w, h, bits.iter().map(|&b| b != 0).collect())
    }

    #[test]
    fn bruteforce_all_ink_is_zero() {
        let dm = edt_bruteforce(&mask_from(3, 3, &[1; 9]));
        assert!(dm.data().iter().all(|&d| d == 0));
    }

    #[test]
    fn bruteforce_row_squared_offsets() {
        let dm = edt_bruteforce(&mask_from(3, 1, &[1, 0, 0]));
        assert_eq!(dm.data(), &[0, 1, 4]);
    }

    #[test]
    fn bruteforce_single_center() {
        let dm = edt_bruteforce(&mask_from(3, 3, &[0, 0, 0, 0, 1, 0, 0, 0, 0]));
        assert_eq!(dm.data(), &[2, 1, 2, 1, 0, 1, 2, 1, 2]);
    }

    #[test]
    fn exact_all_background_is_no_ink() {
        let dm = edt_exact(&InkMask::new(5, 4));
        assert!(dm.data().iter().all(|&d| d == NO_INK));
    }

    #[test]
    fn exact_vertical_ink_column() {
        let mut mask = InkMask::new(4, 3);
        for y in 0..3 {
            mask.set(0, y, true);
        }
        let dm = edt_exact(&mask);
        for y in 0..3 {
            for x in 0..4u64 {
                assert_eq!(dm.get(x as u32, y), x * x);
            }
        }
    }

    #[test]
    fn exact_equals_bruteforce_randomized() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..60 {
            let w = rng.gen_range(1..=48u32);
            let h = rng.gen_range(1..=48u32);
            let density: f64 = rng.gen();
            let data: Vec<bool> = (0..w * h).map(|_| rng.gen_bool(density)).collect();
            let mask = InkMask::from_raw(w, h, data);
            let fast = edt_exact(&mask);
            let slow = edt_bruteforce(&mask);
            assert_eq!(fast, slow, "mismatch on {w}x{h} density {density:.2}");
        }
    }

    #[test]
    fn zero_set_equals_ink_set() {
        let mut rng = StdRng::seed_from_u64(9);
        let data: Vec<bool> = (0..32 * 32).map(|_| rng.gen_bool(0.1)).collect();
        let mask = InkMask::from_raw(32, 32, data);
        let dm = edt_exact(&mask);
        for y in 0..32 {
            for x in 0..32 {
                assert_eq!(dm.get(x, y) == 0, mask.get(x, y));
            }
        }
    }

    #[test]
    fn adding_ink_never_increases_distances() {
        let mut rng = StdRng::seed_from_u64(17);
        let mut mask = InkMask::new(24, 24);
        for _ in 0..10 {
            mask.set(rng.gen_range(0..24), rng.gen_range(0..24), true);
        }
        let before = edt_exact(&mask);
        mask.set(12, 12, true);
        let after = edt_exact(&mask);
        for (a, b) in after.data().iter().zip(before.data()) {
            assert!(a <= b);
        }
    }

    #[test]
    fn true_distance_is_one_lipschitz() {
        let mut rng = StdRng::seed_from_u64(23);
        let data: Vec<bool> = (0..40 * 30).map(|_| rng.gen_bool(0.05)).collect();
        let mask = InkMask::from_raw(40, 30, data);
        let dm = edt_exact(&mask);
        for y in 0..30u32 {
            for x in 0..40u32 {
                let r = libm::sqrt(dm.get(x, y) as f64);
                if x + 1 < 40 {
                    let rn = libm::sqrt(dm.get(x + 1, y) as f64);
                    assert!((r - rn).abs() <= 1.0 + 1e-12);
                }
                if y + 1 < 30 {
                    let rn = libm::sqrt(dm.get(x, y + 1) as f64);
                    assert!((r - rn).abs() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn gray_ink_is_zero_in_both_modes() {
        let dm = edt_exact(&mask_from(3, 1, &[1, 0, 0]));
        for mode in [ScaleMode::FixedScale, ScaleMode::MaxNormalize] {
            let img = distance_to_gray(&dm, mode, 4.0).unwrap();
            assert_eq!(img.get(0, 0), 0);
        }
    }

    #[test]
    fn gray_fixed_scale_values() {
        // r = 2 with d_sat 4 -> 128; r >= d_sat saturates at 255.
        let dm = edt_bruteforce(&mask_from(6, 1, &[1, 0, 0, 0, 0, 0]));
        let img = distance_to_gray(&dm, ScaleMode::FixedScale, 4.0).unwrap();
        assert_eq!(img.get(2, 0), 128);
        assert_eq!(img.get(4, 0), 255);
        assert_eq!(img.get(5, 0), 255);
    }

    #[test]
    fn gray_max_normalize_values() {
        let dm = edt_bruteforce(&mask_from(3, 1, &[1, 0, 0]));
        let img = distance_to_gray(&dm, ScaleMode::MaxNormalize, 1.0).unwrap();
        assert_eq!(img.data(), &[0, 128, 255]);
    }

    #[test]
    fn gray_no_ink_maps_to_255() {
        let dm = edt_exact(&InkMask::new(2, 2));
        for mode in [ScaleMode::FixedScale, ScaleMode::MaxNormalize] {
            let img = distance_to_gray(&dm, mode, 4.0).unwrap();
            assert!(img.data().iter().all(|&v| v == 255));
        }
    }

    #[test]
    fn gray_all_ink_max_normalize_is_zero() {
        let dm = edt_exact(&mask_from(2, 2, &[1; 4]));
        let img = distance_to_gray(&dm, ScaleMode::MaxNormalize, 1.0).unwrap();
        assert!(img.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn gray_rejects_non_positive_saturation() {
        let dm = edt_exact(&mask_from(2, 1, &[1, 0]));
        assert_eq!(
            distance_to_gray(&dm, ScaleMode::FixedScale, 0.0),
            Err(NonPositiveSaturation)
        );
    }

    #[test]
    fn gray_monotone_in_distance() {
        let mut rng = StdRng::seed_from_u64(31);
        let data: Vec<bool> = (0..30 * 20).map(|_| rng.gen_bool(0.03)).collect();
        let mask = InkMask::from_raw(30, 20, data);
        let dm = edt_exact(&mask);
        for mode in [ScaleMode::FixedScale, ScaleMode::MaxNormalize] {
            let img = distance_to_gray(&dm, mode, 6.0).unwrap();
            let mut pairs: Vec<(u64, u8)> = dm
                .data()
                .iter()
                .zip(img.data())
                .map(|(&d, &g)| (d, g))
                .collect();
            pairs.sort_unstable();
            for win in pairs.windows(2) {
                assert!(win[0].1 <= win[1].1);
            }
        }
    }
}
