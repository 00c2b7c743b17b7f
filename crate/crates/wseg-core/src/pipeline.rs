//! End-to-end page segmentation: the stage sequence from gray page to
//! repaired word list.

use alloc::vec::Vec;
use core::fmt;

use crate::ccl::{component_stats, label_components, Connectivity, LabelMap};
use crate::edt::{distance_to_gray, edt_exact, NonPositiveSaturation};
use crate::postproc::repair;
use crate::preprocess::{binarize_otsu, gaussian_blur, NonPositiveSigma};
use crate::raster::{GrayImage, InkMask};
use crate::segment::{
    detect_border_component, extract_words, slice_border_component, smear,
    sort_reading_order, word_from_region_pixels, Provenance, SegConfig, WordBox,
};

/// Configuration rejected by a pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineError {
    NonPositiveSigma,
    NonPositiveSaturation,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::NonPositiveSigma => write!(f, "gaussian sigma must be > 0"),
            PipelineError::NonPositiveSaturation => write!(f, "saturation distance must be > 0"),
        }
    }
}

impl core::error::Error for PipelineError {}

impl From<NonPositiveSigma> for PipelineError {
    fn from(_: NonPositiveSigma) -> Self {
        PipelineError::NonPositiveSigma
    }
}

impl From<NonPositiveSaturation> for PipelineError {
    fn from(_: NonPositiveSaturation) -> Self {
        PipelineError::NonPositiveSaturation
    }
}

/// Turn labeled smeared regions into words, slicing the border component
/// first when one is present. Output is sorted in reading order but not yet
/// repaired.
pub fn regions_to_words(ink: &InkMask, smear_labels: &LabelMap, cfg: &SegConfig) -> Vec<WordBox> {
    let comps = component_stats(smear_labels);
    let page = (smear_labels.width(), smear_labels.height());
    let Some(border) = detect_border_component(&comps, page) else {
        // extract_words only errors on a dimension mismatch, which cannot
        // happen here: the smear mask was derived from the same page.
        return extract_words(ink, smear_labels, cfg).expect("dimensions match");
    };

    let mut words = Vec::new();
    // Ink under the ordinary regions.
    let n = smear_labels.count() as usize;
    let mut per_label: Vec<Vec<(u32, u32)>> = alloc::vec![Vec::new(); n];
    for (x, y) in ink.ink_pixels() {
        let l = smear_labels.get(x, y);
        if l != 0 && l != border {
            per_label[(l - 1) as usize].push((x, y));
        }
    }
    for px in per_label {
        if px.len() >= cfg.min_word_pixels {
            if let Some(w) = WordBox::from_pixels(&px, Provenance::Direct) {
                words.push(w);
            }
        }
    }
    // Ink under the sliced border pieces.
    for piece in slice_border_component(&smear_labels.mask_of(border), cfg) {
        if let Some(w) =
            word_from_region_pixels(ink, &piece, cfg.min_word_pixels, Provenance::BorderSliced)
        {
            words.push(w);
        }
    }
    sort_reading_order(&mut words);
    words
}

/// Run the full pipeline on a gray page: blur, binarize, distance transform,
/// smear at alpha, label, slice the border component if any, extract words,
/// and repair under-segmentations.
pub fn segment_page(gray: &GrayImage, cfg: &SegConfig) -> Result<Vec<WordBox>, PipelineError> {
    let blurred = gaussian_blur(gray, cfg.sigma)?;
    let ink = binarize_otsu(&blurred);
    let dm = edt_exact(&ink);
    let gdt = distance_to_gray(&dm, cfg.scale_mode, cfg.d_sat)?;
    let smeared = smear(&gdt, cfg.alpha);
    let labels = label_components(&smeared, Connectivity::Eight);
    let words = regions_to_words(&ink, &labels, cfg);
    Ok(repair(&words, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page_with_blobs(w: u32, h: u32, blobs: &[(u32, u32, u32, u32)]) -> GrayImage {
        let mut img = GrayImage::filled(w, h, 255);
        for &(x0, y0, bw, bh) in blobs {
            for y in y0..y0 + bh {
                for x in x0..x0 + bw {
                    img.set(x, y, 0);
                }
            }
        }
        img
    }

    #[test]
    fn blank_page_yields_no_words() {
        let img = GrayImage::filled(64, 48, 255);
        let words = segment_page(&img, &SegConfig::default()).unwrap();
        assert!(words.is_empty());
    }

    #[test]
    fn two_far_blobs_are_two_words() {
        // Default effective smear radius is ~15 px, so a 40-px gap keeps the
        // blobs separate while each blob's own pixels stay together.
        let img = page_with_blobs(160, 60, &[(10, 20, 20, 12), (70, 20, 20, 12)]);
        let words = segment_page(&img, &SegConfig::default()).unwrap();
        assert_eq!(words.len(), 2);
        // Binarizing the blurred page moves edges by at most ~1 px.
        let b = words[0].bbox;
        assert!(b.x.abs_diff(10) <= 2 && b.y.abs_diff(20) <= 2);
        assert!(b.w.abs_diff(20) <= 4 && b.h.abs_diff(12) <= 4);
    }

    #[test]
    fn two_near_blobs_merge_into_one_word() {
        let img = page_with_blobs(120, 60, &[(10, 20, 20, 12), (36, 20, 20, 12)]);
        let words = segment_page(&img, &SegConfig::default()).unwrap();
        assert_eq!(words.len(), 1);
        let b = words[0].bbox;
        assert!(b.w >= 40, "merged box should span both blobs, got {b:?}");
    }

    #[test]
    fn rejects_bad_config() {
        let img = GrayImage::filled(8, 8, 255);
        let bad_sigma = SegConfig {
            sigma: 0.0,
            ..SegConfig::default()
        };
        assert_eq!(
            segment_page(&img, &bad_sigma),
            Err(PipelineError::NonPositiveSigma)
        );
        let bad_sat = SegConfig {
            d_sat: -1.0,
            ..SegConfig::default()
        };
        assert_eq!(
            segment_page(&img, &bad_sat),
            Err(PipelineError::NonPositiveSaturation)
        );
    }

    #[test]
    fn border_frame_is_sliced_into_pieces() {
        // A dumbbell spanning the page: two fat pads connected by a thin
        // bar, pushed to the page edges so the smeared component touches
        // three borders and spans >= 90% both ways. Alpha 0 keeps the smear
        // equal to the ink so the geometry is exact.
        let mut img = GrayImage::filled(60, 40, 255);
        let mut paint = |x0: u32, y0: u32, w: u32, h: u32| {
            for y in y0..y0 + h {
                for x in x0..x0 + w {
                    img.set(x, y, 0);
                }
            }
        };
        paint(0, 0, 26, 40); // left pad, full height
        paint(34, 0, 26, 40); // right pad, full height
        paint(26, 19, 8, 1); // 1-px bar joining them
        let cfg = SegConfig {
            alpha: 0,
            sigma: 0.2, // keep the thin bar alive through the blur
            ..SegConfig::default()
        };
        let words = segment_page(&img, &cfg).unwrap();
        assert_eq!(words.len(), 2, "expected the frame sliced into two pads");
        assert!(words
            .iter()
            .all(|w| w.provenance == crate::segment::Provenance::BorderSliced));
        let left = &words[0].bbox;
        assert!(left.x == 0 && left.w <= 30, "left pad bbox {left:?}");
    }

    #[test]
    fn words_sorted_in_reading_order() {
        let img = page_with_blobs(
            200,
            120,
            &[(120, 10, 20, 12), (10, 10, 20, 12), (10, 70, 20, 12)],
        );
        let words = segment_page(&img, &SegConfig::default()).unwrap();
        assert_eq!(words.len(), 3);
        let origins: Vec<(u32, u32)> = words.iter().map(|w| (w.bbox.y, w.bbox.x)).collect();
        let mut sorted = origins.clone();
        sorted.sort_unstable();
        assert_eq!(origins, sorted);
    }
}
