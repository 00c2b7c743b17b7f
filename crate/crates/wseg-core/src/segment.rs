//! Smearing segmentation: threshold the distance image at alpha, label the
//! smeared black regions, slice a page-spanning border component along its
//! thickness valleys, and collect each region's ink pixels into a word.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ccl::{label_components, Component, Connectivity, LabelMap};
use crate::edt::ScaleMode;
use crate::num::lower_median;
use crate::raster::{GrayImage, InkMask, Rect};

/// Tuning knobs for the whole segmentation pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SegConfig {
    /// Gaussian sigma for noise removal.
    pub sigma: f64,
    /// Smearing threshold on the 0-255 distance image.
    pub alpha: u8,
    /// How distances map to 0-255.
    pub scale_mode: ScaleMode,
    /// Saturation distance (px) for fixed-scale mapping.
    pub d_sat: f64,
    /// Multiplier on word height for the cross-line split window.
    pub beta_factor: f64,
    /// A word wider than this times the median width is a join suspect.
    pub width_join_factor: f64,
    /// A word taller than this times the median height is a join suspect.
    pub height_join_factor: f64,
    /// Column/row thickness at or below this fraction of the median marks a
    /// valley when slicing the border component.
    pub valley_thickness_factor: f64,
    /// Regions and split halves with fewer ink pixels than this are dropped.
    pub min_word_pixels: usize,
}

impl Default for SegConfig {
    fn default() -> Self {
        SegConfig {
            sigma: 1.0,
            alpha: 160,
            scale_mode: ScaleMode::FixedScale,
            d_sat: 24.0,
            beta_factor: 0.2,
            width_join_factor: 1.8,
            height_join_factor: 1.6,
            valley_thickness_factor: 0.1,
            min_word_pixels: 15,
        }
    }
}

/// How a word came out of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Direct,
    BorderSliced,
    SplitHorizontal,
    SplitVertical,
}

/// One extracted word: its tight bounding box and its own ink pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBox {
    pub bbox: Rect,
    /// Ink mask clipped to `bbox` (dimensions `bbox.w` x `bbox.h`).
    pub mask: InkMask,
    pub provenance: Provenance,
}

impl WordBox {
    /// Build from absolute pixel coordinates; `None` when empty.
    pub fn from_pixels(pixels: &[(u32, u32)], provenance: Provenance) -> Option<WordBox> {
        let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0u32, 0u32);
        for &(x, y) in pixels {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if pixels.is_empty() {
            return None;
        }
        let bbox = Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1);
        let mut mask = InkMask::new(bbox.w, bbox.h);
        for &(x, y) in pixels {
            mask.set(x - x0, y - y0, true);
        }
        Some(WordBox {
            bbox,
            mask,
            provenance,
        })
    }

    pub fn ink_count(&self) -> usize {
        self.mask.count_ink()
    }

    /// Ink pixels in page coordinates.
    pub fn pixels_abs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let (bx, by) = (self.bbox.x, self.bbox.y);
        self.mask.ink_pixels().map(move |(x, y)| (bx + x, by + y))
    }
}

/// Threshold the distance image: true where intensity <= alpha.
pub fn smear(gray_dt: &GrayImage, alpha: u8) -> InkMask {
    let data = gray_dt.data().iter().map(|&v| v <= alpha).collect();
    InkMask::from_raw(gray_dt.width(), gray_dt.height(), data)
}

/// Find the page-spanning component the smearing step can create along the
/// page border: it must touch at least three image borders and its box must
/// span at least 90% of the page in both dimensions. When several qualify
/// the largest one (by pixel count) is reported.
pub fn detect_border_component(comps: &[Component], page: (u32, u32)) -> Option<u32> {
    let (pw, ph) = page;
    comps
        .iter()
        .filter(|c| {
            c.touches.count() >= 3
                && 10 * c.bbox.w as u64 >= 9 * pw as u64
                && 10 * c.bbox.h as u64 >= 9 * ph as u64
        })
        .max_by(|a, b| {
            a.pixel_count
                .cmp(&b.pixel_count)
                .then(b.label.cmp(&a.label))
        })
        .map(|c| c.label)
}

/// Maximal runs of indices whose profile value is at or below `threshold`.
fn valley_runs(profile: &[u32], threshold: f64) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &v) in profile.iter().enumerate() {
        if (v as f64) <= threshold {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            runs.push((s, i - 1));
        }
    }
    if let Some(s) = start {
        runs.push((s, profile.len() - 1));
    }
    runs
}

/// Slice one connected component along its thickness valleys.
///
/// A vertical valley is a maximal run of columns whose ink thickness is at
/// most `valley_thickness_factor` times the median column thickness
/// (horizontal valleys are defined symmetrically over rows). The component
/// is cut at the center of every valley run; connected pieces with at least
/// `min_word_pixels` pixels survive, the rest are discarded. The masks are
/// full page size so pieces can stand in for smeared regions downstream.
pub fn slice_border_component(mask: &InkMask, cfg: &SegConfig) -> Vec<InkMask> {
    let bbox = match mask.ink_bbox() {
        Some(b) => b,
        None => return Vec::new(),
    };

    let mut col_thickness = vec![0u32; bbox.w as usize];
    let mut row_thickness = vec![0u32; bbox.h as usize];
    for (x, y) in mask.ink_pixels() {
        col_thickness[(x - bbox.x) as usize] += 1;
        row_thickness[(y - bbox.y) as usize] += 1;
    }
    // Within a connected component's bbox every column and row has ink, so
    // these are the medians of the positive thicknesses.
    let col_median = lower_median(&mut col_thickness.clone());
    let row_median = lower_median(&mut row_thickness.clone());

    let col_runs = valley_runs(&col_thickness, cfg.valley_thickness_factor * col_median as f64);
    let row_runs = valley_runs(&row_thickness, cfg.valley_thickness_factor * row_median as f64);
    if col_runs.is_empty() && row_runs.is_empty() {
        return vec![mask.clone()];
    }

    // Cut between c and c+1 at the center of each valley run, partitioning
    // the bbox into a grid of cells; no pixel is lost to the cut itself.
    let col_cuts: Vec<u32> = col_runs
        .iter()
        .map(|&(a, b)| bbox.x + ((a + b) / 2) as u32)
        .collect();
    let row_cuts: Vec<u32> = row_runs
        .iter()
        .map(|&(a, b)| bbox.y + ((a + b) / 2) as u32)
        .collect();

    let mut x_bounds = vec![bbox.x];
    x_bounds.extend(col_cuts.iter().map(|&c| c + 1));
    x_bounds.push(bbox.x + bbox.w);
    let mut y_bounds = vec![bbox.y];
    y_bounds.extend(row_cuts.iter().map(|&c| c + 1));
    y_bounds.push(bbox.y + bbox.h);

    let mut pieces = Vec::new();
    for wy in y_bounds.windows(2) {
        for wx in x_bounds.windows(2) {
            if wx[0] >= wx[1] || wy[0] >= wy[1] {
                continue;
            }
            let mut cell = InkMask::new(mask.width(), mask.height());
            let mut any = false;
            for y in wy[0]..wy[1] {
                for x in wx[0]..wx[1] {
                    if mask.get(x, y) {
                        cell.set(x, y, true);
                        any = true;
                    }
                }
            }
            if !any {
                continue;
            }
            let lm = label_components(&cell, Connectivity::Eight);
            for label in 1..=lm.count() {
                let piece = lm.mask_of(label);
                if piece.count_ink() >= cfg.min_word_pixels {
                    pieces.push(piece);
                }
            }
        }
    }
    pieces
}

/// Region and ink rasters must share dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionMismatch;

impl fmt::Display for DimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ink mask and label map dimensions differ")
    }
}

impl core::error::Error for DimensionMismatch {}

/// Collect the original ink pixels under one smeared region into a word.
pub(crate) fn word_from_region_pixels(
    ink: &InkMask,
    region: &InkMask,
    min_word_pixels: usize,
    provenance: Provenance,
) -> Option<WordBox> {
    let pixels: Vec<(u32, u32)> = ink.ink_pixels().filter(|&(x, y)| region.get(x, y)).collect();
    if pixels.len() < min_word_pixels {
        return None;
    }
    WordBox::from_pixels(&pixels, provenance)
}

/// Extract one word per smeared-region label.
///
/// A word's mask is the set of original ink pixels covered by its region;
/// regions with fewer than `min_word_pixels` ink pixels are dropped. Output
/// is sorted by (bbox.y, bbox.x).
pub fn extract_words(
    ink: &InkMask,
    smear_labels: &LabelMap,
    cfg: &SegConfig,
) -> Result<Vec<WordBox>, DimensionMismatch> {
    if ink.width() != smear_labels.width() || ink.height() != smear_labels.height() {
        return Err(DimensionMismatch);
    }
    let n = smear_labels.count() as usize;
    let mut per_label: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (x, y) in ink.ink_pixels() {
        let l = smear_labels.get(x, y);
        if l != 0 {
            per_label[(l - 1) as usize].push((x, y));
        }
    }
    let mut words: Vec<WordBox> = per_label
        .iter()
        .filter(|px| px.len() >= cfg.min_word_pixels)
        .filter_map(|px| WordBox::from_pixels(px, Provenance::Direct))
        .collect();
    sort_reading_order(&mut words);
    Ok(words)
}

/// Reading order: top-to-bottom, then left-to-right by box origin.
pub(crate) fn sort_reading_order(words: &mut [WordBox]) {
    words.sort_by_key(|w| (w.bbox.y, w.bbox.x));
}
