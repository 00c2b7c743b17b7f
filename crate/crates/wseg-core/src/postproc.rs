//! Under-segmentation repair: find word candidates that are suspiciously
//! large relative to the page's median word size and split them.
//!
//! Same-line joins show up as over-wide candidates and are cut at a vertical
//! ink valley. Cross-line joins (ascender touching descender) are over-tall;
//! there is rarely a clean horizontal valley, so the cut is the perpendicular
//! bisector of the closest pair of boundary points between the two word
//! bodies, searched inside a square window whose half-side beta grows with
//! the candidate's height.

use alloc::vec;
use alloc::vec::Vec;

use crate::num::{lower_median, round_half_up};
use crate::raster::InkMask;
use crate::segment::{sort_reading_order, Provenance, SegConfig, WordBox};

/// Page-level size statistics driving the join triggers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PageStats {
    pub median_word_width: u32,
    pub median_word_height: u32,
    pub word_count: usize,
}

/// Lower medians of the word box dimensions; zeros for an empty page.
pub fn page_stats(words: &[WordBox]) -> PageStats {
    let mut widths: Vec<u32> = words.iter().map(|w| w.bbox.w).collect();
    let mut heights: Vec<u32> = words.iter().map(|w| w.bbox.h).collect();
    PageStats {
        median_word_width: lower_median(&mut widths),
        median_word_height: lower_median(&mut heights),
        word_count: words.len(),
    }
}

/// Half-side of the cross-line split window: `round(factor * height)`, at
/// least 1 px.
pub fn beta_of(word_height: u32, beta_factor: f64) -> u32 {
    let b = round_half_up(beta_factor * word_height as f64) as u32;
    b.max(1)
}

const MAX_SPLIT_DEPTH: u32 = 4;

fn column_ink_counts(mask: &InkMask) -> Vec<u32> {
    let mut counts = vec![0u32; mask.width() as usize];
    for (x, _) in mask.ink_pixels() {
        counts[x as usize] += 1;
    }
    counts
}

fn row_ink_counts(mask: &InkMask) -> Vec<u32> {
    let mut counts = vec![0u32; mask.height() as usize];
    for (_, y) in mask.ink_pixels() {
        counts[y as usize] += 1;
    }
    counts
}

/// Split an over-wide candidate at a vertical valley.
///
/// The cut column is searched in the central 80% of the box width: the
/// widest all-background run wins (cut at its center), otherwise the column
/// with the least ink (leftmost on ties). Both halves are re-checked
/// recursively.
pub fn split_horizontal_join(word: &WordBox, stats: &PageStats, cfg: &SegConfig) -> Vec<WordBox> {
    split_horizontal_rec(word, stats, cfg, 0)
}

fn split_horizontal_rec(
    word: &WordBox,
    stats: &PageStats,
    cfg: &SegConfig,
    depth: u32,
) -> Vec<WordBox> {
    let w = word.bbox.w;
    if depth >= MAX_SPLIT_DEPTH
        || stats.median_word_width == 0
        || w as f64 <= cfg.width_join_factor * stats.median_word_width as f64
    {
        return vec![word.clone()];
    }

    let counts = column_ink_counts(&word.mask);
    let lo = (0.1 * w as f64) as usize;
    let hi = w as usize - lo;

    // Widest zero run in the band, ties to the leftmost.
    let mut best_zero: Option<(usize, usize)> = None;
    let mut run_start = None;
    for c in lo..hi {
        if counts[c] == 0 {
            run_start.get_or_insert(c);
        } else if let Some(s) = run_start.take() {
            if best_zero.is_none_or(|(bs, be)| c - s > be - bs + 1) {
                best_zero = Some((s, c - 1));
            }
        }
    }
    if let Some(s) = run_start {
        if best_zero.is_none_or(|(bs, be)| hi - s > be - bs + 1) {
            best_zero = Some((s, hi - 1));
        }
    }

    let cut = match best_zero {
        Some((s, e)) => (s + e) / 2,
        None => {
            let mut min_c = lo;
            for c in lo..hi {
                if counts[c] < counts[min_c] {
                    min_c = c;
                }
            }
            min_c
        }
    };

    // Left half keeps the cut column.
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (x, y) in word.pixels_abs() {
        if (x - word.bbox.x) as usize <= cut {
            left.push((x, y));
        } else {
            right.push((x, y));
        }
    }
    let halves: Vec<WordBox> = [left, right]
        .iter()
        .filter_map(|px| WordBox::from_pixels(px, Provenance::SplitHorizontal))
        .collect();
    if halves.len() < 2 && halves.first().map(|h| h.bbox.w) == Some(w) {
        // Degenerate cut at the box edge; splitting again would not progress.
        return vec![word.clone()];
    }
    halves
        .iter()
        .flat_map(|h| split_horizontal_rec(h, stats, cfg, depth + 1))
        .collect()
}

/// Pixels of the mask with at least one background (or out-of-box) pixel in
/// their 8-neighborhood.
fn contour_pixels(mask: &InkMask) -> Vec<(u32, u32)> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    mask.ink_pixels()
        .filter(|&(x, y)| {
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        return true;
                    }
                    if !mask.get(nx as u32, ny as u32) {
                        return true;
                    }
                }
            }
            false
        })
        .collect()
}

/// Split an over-tall candidate along the boundary between two stacked word
/// bodies.
///
/// Contour pixels are divided into an upper and a lower set at the row with
/// the least ink in the central 60% of the box height. The closest opposing
/// boundary points seed a square window of half-side [`beta_of`]; the cut is
/// the perpendicular bisector of the closest cross-set pair found inside
/// that window, extended horizontally beyond the window's columns.
pub fn split_vertical_join(word: &WordBox, stats: &PageStats, cfg: &SegConfig) -> Vec<WordBox> {
    split_vertical_rec(word, stats, cfg, 0)
}

fn split_vertical_rec(
    word: &WordBox,
    stats: &PageStats,
    cfg: &SegConfig,
    depth: u32,
) -> Vec<WordBox> {
    let h = word.bbox.h;
    if depth >= MAX_SPLIT_DEPTH
        || stats.median_word_height == 0
        || h as f64 <= cfg.height_join_factor * stats.median_word_height as f64
    {
        return vec![word.clone()];
    }

    let row_counts = row_ink_counts(&word.mask);
    let lo = (0.2 * h as f64) as usize;
    let hi = h as usize - lo;
    let mut split_row = lo;
    for r in lo..hi {
        if row_counts[r] < row_counts[split_row] {
            split_row = r;
        }
    }

    let contour = contour_pixels(&word.mask);
    let upper: Vec<(u32, u32)> = contour
        .iter()
        .copied()
        .filter(|&(_, y)| y as usize <= split_row)
        .collect();
    let lower: Vec<(u32, u32)> = contour
        .iter()
        .copied()
        .filter(|&(_, y)| y as usize > split_row)
        .collect();
    if upper.is_empty() || lower.is_empty() {
        return vec![word.clone()];
    }

    // Per-column extremes: the lower contour of the upper set and the upper
    // contour of the lower set.
    let w = word.bbox.w as usize;
    let mut bottom_of_upper = vec![None::<u32>; w];
    for &(x, y) in &upper {
        let e = &mut bottom_of_upper[x as usize];
        *e = Some(e.map_or(y, |v: u32| v.max(y)));
    }
    let mut top_of_lower = vec![None::<u32>; w];
    for &(x, y) in &lower {
        let e = &mut top_of_lower[x as usize];
        *e = Some(e.map_or(y, |v: u32| v.min(y)));
    }

    // Seed: the opposing boundary points at the same (or nearest) column
    // with the least vertical separation.
    let mut seed: Option<((u32, u32), (u32, u32), (u32, i64))> = None;
    for (cu, bu) in bottom_of_upper.iter().enumerate() {
        let Some(yu) = *bu else { continue };
        for (cl, tl) in top_of_lower.iter().enumerate() {
            let Some(yl) = *tl else { continue };
            let key = ((cu as i64 - cl as i64).unsigned_abs() as u32, yl as i64 - yu as i64);
            if seed.is_none_or(|(_, _, best)| key < best) {
                seed = Some(((cu as u32, yu), (cl as u32, yl), key));
            }
        }
    }
    let Some((seed_top, seed_bot, _)) = seed else {
        return vec![word.clone()];
    };

    let beta = beta_of(h, cfg.beta_factor) as f64;
    let mx = (seed_top.0 as f64 + seed_bot.0 as f64) / 2.0;
    let my = (seed_top.1 as f64 + seed_bot.1 as f64) / 2.0;
    let in_window = |p: (u32, u32)| {
        (p.0 as f64 - mx).abs() <= beta && (p.1 as f64 - my).abs() <= beta
    };

    // Closest cross-set pair inside the window; the seed pair is the
    // fallback when the window contains no cross pair.
    let mut cut_pair = (seed_top, seed_bot);
    let mut best_d2 = i64::MAX;
    for &u in upper.iter().filter(|&&p| in_window(p)) {
        for &l in lower.iter().filter(|&&p| in_window(p)) {
            let dx = u.0 as i64 - l.0 as i64;
            let dy = u.1 as i64 - l.1 as i64;
            let d2 = dx * dx + dy * dy;
            let key = (d2, u.1, u.0, l.1, l.0);
            if key < (best_d2, cut_pair.0 .1, cut_pair.0 .0, cut_pair.1 .1, cut_pair.1 .0)
                || best_d2 == i64::MAX
            {
                best_d2 = d2;
                cut_pair = (u, l);
            }
        }
    }

    let (p1, p2) = cut_pair;
    let dx = p2.0 as f64 - p1.0 as f64;
    let dy = p2.1 as f64 - p1.1 as f64;
    if dy == 0.0 {
        // A horizontal pair admits no top/bottom cut.
        return vec![word.clone()];
    }
    let cx = (p1.0 as f64 + p2.0 as f64) / 2.0;
    let cy = (p1.1 as f64 + p2.1 as f64) / 2.0;
    let win_left = mx - beta;
    let win_right = mx + beta;
    // Height of the bisector of (p1, p2) at column x.
    let cut_y = |x: f64| cy - dx * (x - cx) / dy;

    let mut top_px = Vec::new();
    let mut bot_px = Vec::new();
    for (ax, ay) in word.pixels_abs() {
        let qx = (ax - word.bbox.x) as f64;
        let qy = (ay - word.bbox.y) as f64;
        let upper_side = if qx < win_left {
            qy <= cut_y(win_left)
        } else if qx > win_right {
            qy <= cut_y(win_right)
        } else {
            (qx - cx) * dx + (qy - cy) * dy <= 0.0
        };
        if upper_side {
            top_px.push((ax, ay));
        } else {
            bot_px.push((ax, ay));
        }
    }

    let pieces: Vec<WordBox> = [top_px, bot_px]
        .iter()
        .filter_map(|px| WordBox::from_pixels(px, Provenance::SplitVertical))
        .collect();
    if pieces.len() < 2 {
        return vec![word.clone()];
    }
    pieces
        .iter()
        .flat_map(|p| split_vertical_rec(p, stats, cfg, depth + 1))
        .collect()
}

/// Repair a page's word list: split cross-line joins, then same-line joins,
/// and restore reading order. Idempotent on its own output.
pub fn repair(words: &[WordBox], cfg: &SegConfig) -> Vec<WordBox> {
    let stats = page_stats(words);
    let mut out = Vec::with_capacity(words.len());
    for word in words {
        for tall in split_vertical_join(word, &stats, cfg) {
            out.extend(split_horizontal_join(&tall, &stats, cfg));
        }
    }
    sort_reading_order(&mut out);
    out
}
