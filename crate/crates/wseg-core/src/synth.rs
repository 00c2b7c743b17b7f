//! Deterministic synthetic document pages with exact ground truth.
//!
//! Pages are laid out as lines of pseudo-words; each word is a run of filled
//! pseudo-glyph blobs (rectangles with carved notches and optional
//! ascender/descender stubs) separated by small intra-word gaps. Words are
//! separated by larger inter-word gaps and lines by still larger line gaps,
//! so the gap statistics that drive smearing are fully controlled. The
//! generator is reproducible bit for bit from the seed on any platform
//! because it uses a fixed xorshift64* generator.

use core::fmt;

use crate::raster::{BoxList, GrayImage, Rect};

/// xorshift64* with a splitmix64-scrambled seed.
///
/// `next_u64` advances `x ^= x >> 12; x ^= x << 25; x ^= x >> 27` and
/// returns `x * 0x2545F4914F6CDD1D`. Test vectors live in the unit tests
/// and in the project README.
#[derive(Debug, Clone)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        // splitmix64 scramble so nearby seeds give unrelated streams.
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Xorshift64Star {
            // xorshift state must be nonzero
            state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state ^= self.state >> 12;
        self.state ^= self.state << 25;
        self.state ^= self.state >> 27;
        self.state.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, n)`. Plain modulo: the tiny bias is irrelevant for
    /// layout sampling and keeps the stream trivially portable.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Uniform over an inclusive range.
    pub fn in_range(&mut self, range: (u32, u32)) -> u32 {
        debug_assert!(range.0 <= range.1);
        range.0 + self.below((range.1 - range.0 + 1) as u64) as u32
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

/// Layout parameters for one synthetic page. All ranges are inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub page_width: u32,
    pub page_height: u32,
    pub lines: u32,
    pub words_per_line: (u32, u32),
    pub chars_per_word: (u32, u32),
    /// Glyph width and height are both drawn from this range.
    pub char_size: (u32, u32),
    pub intra_word_gap: (u32, u32),
    pub inter_word_gap: (u32, u32),
    pub line_gap: (u32, u32),
    /// Maximum per-word vertical offset from the line's nominal position.
    pub jitter: u32,
    pub stroke_gray: u8,
    /// Probability of turning an isolated background pixel into a speck.
    pub noise_salt_prob: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        // Gaps sized so the default pipeline's smear radius (~15 px) merges
        // glyphs within a word but never bridges words or lines.
        SynthSpec {
            page_width: 1000,
            page_height: 900,
            lines: 10,
            words_per_line: (6, 8),
            chars_per_word: (2, 4),
            char_size: (12, 18),
            intra_word_gap: (1, 3),
            inter_word_gap: (36, 44),
            line_gap: (36, 44),
            jitter: 2,
            stroke_gray: 0,
            noise_salt_prob: 0.01,
            seed: 0,
        }
    }
}

const MARGIN: u32 = 8;

/// The sampled layout does not fit the page.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutOverflow {
    pub line: u32,
}

impl fmt::Display for LayoutOverflow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "layout overflows the page at line {}", self.line)
    }
}

impl core::error::Error for LayoutOverflow {}

struct GlyphPainter<'a> {
    img: &'a mut GrayImage,
    stroke: u8,
    // tight bbox of the current word's ink
    min_x: u32,
    min_y: u32,
    max_x: u32,
    max_y: u32,
    any: bool,
}

impl GlyphPainter<'_> {
    fn fill(&mut self, x0: u32, y0: u32, w: u32, h: u32, value: u8) {
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                self.img.set(x, y, value);
            }
        }
        if value != 255 {
            self.any = true;
            self.min_x = self.min_x.min(x0);
            self.min_y = self.min_y.min(y0);
            self.max_x = self.max_x.max(x0 + w - 1);
            self.max_y = self.max_y.max(y0 + h - 1);
        }
    }

    fn word_bbox(&self) -> Option<Rect> {
        self.any.then(|| {
            Rect::new(
                self.min_x,
                self.min_y,
                self.max_x - self.min_x + 1,
                self.max_y - self.min_y + 1,
            )
        })
    }
}

/// Generate one page and its ground-truth word boxes.
///
/// Deterministic in `spec.seed`. Word boxes are the tight bounding boxes of
/// each word's ink, in reading order; salt noise is applied after the truth
/// is recorded and only to pixels whose entire 8-neighborhood is still
/// background, so specks never touch words or each other.
pub fn synth_page(spec: &SynthSpec) -> Result<(GrayImage, BoxList), LayoutOverflow> {
    assert!(spec.lines >= 1, "at least one line");
    assert!(spec.words_per_line.0 >= 1 && spec.words_per_line.0 <= spec.words_per_line.1);
    assert!(spec.chars_per_word.0 >= 1 && spec.chars_per_word.0 <= spec.chars_per_word.1);
    assert!(spec.char_size.0 >= 2 && spec.char_size.0 <= spec.char_size.1);
    assert!(spec.intra_word_gap.0 <= spec.intra_word_gap.1);
    assert!(spec.inter_word_gap.0 <= spec.inter_word_gap.1);
    assert!(spec.line_gap.0 <= spec.line_gap.1);
    assert!(
        spec.intra_word_gap.1 < spec.inter_word_gap.0,
        "intra-word gaps must stay below inter-word gaps"
    );
    assert!(spec.stroke_gray < 255, "strokes must be darker than paper");

    let mut rng = Xorshift64Star::new(spec.seed);
    let mut img = GrayImage::filled(spec.page_width, spec.page_height, 255);
    let mut boxes = BoxList::new();

    let stub_max = spec.char_size.1.div_ceil(3);
    let band_extent = stub_max + spec.char_size.1 + stub_max + 2 * spec.jitter;

    let mut line_top = MARGIN;
    for line in 0..spec.lines {
        if line_top + band_extent + MARGIN > spec.page_height {
            return Err(LayoutOverflow { line });
        }
        let mut x = MARGIN;
        let nwords = rng.in_range(spec.words_per_line);
        for w in 0..nwords {
            if w > 0 {
                x += rng.in_range(spec.inter_word_gap);
            }
            let jit = rng.in_range((0, 2 * spec.jitter));
            let body_top = line_top + stub_max + jit;
            let nchars = rng.in_range(spec.chars_per_word);

            let mut painter = GlyphPainter {
                img: &mut img,
                stroke: spec.stroke_gray,
                min_x: u32::MAX,
                min_y: u32::MAX,
                max_x: 0,
                max_y: 0,
                any: false,
            };
            for c in 0..nchars {
                if c > 0 {
                    x += rng.in_range(spec.intra_word_gap);
                }
                let gw = rng.in_range(spec.char_size);
                let gh = rng.in_range(spec.char_size);
                if x + gw + MARGIN > spec.page_width {
                    return Err(LayoutOverflow { line });
                }
                let stroke = painter.stroke;
                painter.fill(x, body_top, gw, gh, stroke);

                // Carve up to two notches from the glyph edges; they are
                // strictly smaller than the glyph, so it stays connected.
                let mut notches = 0;
                if rng.chance(0.7) {
                    notches += 1;
                }
                if rng.chance(0.3) {
                    notches += 1;
                }
                for _ in 0..notches {
                    let nw = rng.in_range((1, (gw / 3).max(1)));
                    let nh = rng.in_range((1, (gh / 3).max(1)));
                    let side = rng.below(4);
                    let (nx, ny) = match side {
                        0 => (x + rng.in_range((0, gw - nw)), body_top), // top
                        1 => (x + rng.in_range((0, gw - nw)), body_top + gh - nh), // bottom
                        2 => (x, body_top + rng.in_range((0, gh - nh))), // left
                        _ => (x + gw - nw, body_top + rng.in_range((0, gh - nh))), // right
                    };
                    // A notch may erase the pixels that defined the word's
                    // running bbox, but only interior rows/columns of this
                    // glyph, so the recorded extremes stay inked.
                    painter.fill(nx, ny, nw, nh, 255);
                }

                // Ascender / descender stubs.
                if rng.chance(0.25) {
                    let ah = rng.in_range((2.min(stub_max), stub_max));
                    let aw = (gw / 4).max(2).min(gw);
                    let ax = x + rng.in_range((0, gw - aw));
                    painter.fill(ax, body_top - ah, aw, ah, stroke);
                }
                if rng.chance(0.25) {
                    let dh = rng.in_range((2.min(stub_max), stub_max));
                    let dw = (gw / 4).max(2).min(gw);
                    let dx = x + rng.in_range((0, gw - dw));
                    painter.fill(dx, body_top + gh, dw, dh, stroke);
                }
                x += gw;
            }
            boxes.push(painter.word_bbox().expect("word has at least one glyph"));
        }
        line_top += band_extent + rng.in_range(spec.line_gap);
    }

    // Salt noise: raster scan, flipping only pixels whose 8-neighborhood is
    // entirely background at decision time. Earlier flips block later
    // adjacent ones, so specks are always isolated single pixels.
    if spec.noise_salt_prob > 0.0 {
        for y in 0..spec.page_height {
            for x in 0..spec.page_width {
                if !neighborhood_clear(&img, x, y) {
                    continue;
                }
                if rng.chance(spec.noise_salt_prob) {
                    img.set(x, y, spec.stroke_gray);
                }
            }
        }
    }

    Ok((img, boxes))
}

fn neighborhood_clear(img: &GrayImage, x: u32, y: u32) -> bool {
    let (w, h) = (img.width() as i64, img.height() as i64);
    for dy in -1i64..=1 {
        for dx in -1i64..=1 {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w || ny >= h {
                continue;
            }
            if img.get(nx as u32, ny as u32) != 255 {
                return false;
            }
        }
    }
    true
}
