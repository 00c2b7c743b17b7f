//! In-memory raster containers and the overlay renderer.
//!
//! All rasters are row-major with the origin at the top-left corner.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::num::round_half_up;

/// 8-bit single-channel image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl GrayImage {
    /// Image filled with a constant intensity.
    ///
    /// Panics if either dimension is zero.
    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        GrayImage {
            width,
            height,
            data: vec![value; width as usize * height as usize],
        }
    }

    /// Wrap an existing row-major buffer.
    ///
    /// Panics if `data.len() != width * height` or a dimension is zero.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), width as usize * height as usize);
        GrayImage {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        self.data[y as usize * self.width as usize + x as usize] = value;
    }
}

/// 8-bit RGB image, three bytes per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    /// Panics if `data.len() != 3 * width * height` or a dimension is zero.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), 3 * width as usize * height as usize);
        RgbImage {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> (u8, u8, u8) {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        (self.data[i], self.data[i + 1], self.data[i + 2])
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, rgb: (u8, u8, u8)) {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        self.data[i] = rgb.0;
        self.data[i + 1] = rgb.1;
        self.data[i + 2] = rgb.2;
    }

    /// Convert to gray with ITU-R 601 luminance weights, rounding half-up.
    pub fn to_gray(&self) -> GrayImage {
        let data = self
            .data
            .chunks_exact(3)
            .map(|px| luminance(px[0], px[1], px[2]))
            .collect();
        GrayImage::from_raw(self.width, self.height, data)
    }
}

/// y = round(0.299 r + 0.587 g + 0.114 b)
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
    round_half_up(y) as u8
}

/// Axis-aligned rectangle in pixel coordinates, top-left origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Rect { x, y, w, h }
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    /// Area of the intersection with `other`, 0 when disjoint.
    pub fn intersection_area(&self, other: &Rect) -> u64 {
        let x0 = self.x.max(other.x) as u64;
        let y0 = self.y.max(other.y) as u64;
        let x1 = (self.x as u64 + self.w as u64).min(other.x as u64 + other.w as u64);
        let y1 = (self.y as u64 + self.h as u64).min(other.y as u64 + other.h as u64);
        if x1 > x0 && y1 > y0 {
            (x1 - x0) * (y1 - y0)
        } else {
            0
        }
    }

    /// True if the rectangle lies fully inside a `width` x `height` image.
    pub fn fits_in(&self, width: u32, height: u32) -> bool {
        self.w >= 1
            && self.h >= 1
            && self.x as u64 + self.w as u64 <= width as u64
            && self.y as u64 + self.h as u64 <= height as u64
    }
}

/// Ordered list of word boxes, either ground truth or predictions.
pub type BoxList = Vec<Rect>;

/// Binary raster marking ink (object) pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InkMask {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl InkMask {
    /// All-background mask.
    ///
    /// Panics if either dimension is zero.
    pub fn new(width: u32, height: u32) -> Self {
        assert!(width >= 1 && height >= 1, "mask dimensions must be >= 1");
        InkMask {
            width,
            height,
            data: vec![false; width as usize * height as usize],
        }
    }

    /// Panics if `data.len() != width * height` or a dimension is zero.
    pub fn from_raw(width: u32, height: u32, data: Vec<bool>) -> Self {
        assert!(width >= 1 && height >= 1, "mask dimensions must be >= 1");
        assert_eq!(data.len(), width as usize * height as usize);
        InkMask {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.data[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn count_ink(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Coordinates of all ink pixels in raster order.
    pub fn ink_pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| ((i % w as usize) as u32, (i / w as usize) as u32))
    }

    /// Tight bounding box of the ink pixels, `None` if the mask is empty.
    pub fn ink_bbox(&self) -> Option<Rect> {
        let mut x0 = u32::MAX;
        let mut y0 = u32::MAX;
        let mut x1 = 0u32;
        let mut y1 = 0u32;
        let mut any = false;
        for (x, y) in self.ink_pixels() {
            any = true;
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        any.then(|| Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1))
    }
}

/// A box index that falls outside the image passed to [`render_overlay`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxOutOfBounds {
    pub index: usize,
}

impl fmt::Display for BoxOutOfBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "box {} does not fit inside the image", self.index)
    }
}

impl core::error::Error for BoxOutOfBounds {}

/// Replicate a gray image to RGB and draw 1-px box outlines in pure red.
///
/// Pixels not on a box perimeter are left untouched.
pub fn render_overlay(img: &GrayImage, boxes: &[Rect]) -> Result<RgbImage, BoxOutOfBounds> {
    for (index, b) in boxes.iter().enumerate() {
        if !b.fits_in(img.width(), img.height()) {
            return Err(BoxOutOfBounds { index });
        }
    }
    let mut data = Vec::with_capacity(3 * img.data().len());
    for &v in img.data() {
        data.extend_from_slice(&[v, v, v]);
    }
    let mut out = RgbImage::from_raw(img.width(), img.height(), data);
    const RED: (u8, u8, u8) = (255, 0, 0);
    for b in boxes {
        let (x1, y1) = (b.x + b.w - 1, b.y + b.h - 1);
        for x in b.x..=x1 {
            out.set(x, b.y, RED);
            out.set(x, y1, RED);
        }
        for y in b.y..=y1 {
            out.set(b.x, y, RED);
            out.set(x1, y, RED);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luminance_white_and_gray() {
        assert_eq!(luminance(255, 255, 255), 255);
        assert_eq!(luminance(0, 0, 0), 0);
        assert_eq!(luminance(77, 77, 77), 77);
    }

    #[test]
    fn luminance_mixed() {
        // round(0.299*100 + 0.587*200 + 0.114*50) = round(153.0)
        assert_eq!(luminance(100, 200, 50), 153);
    }

    #[test]
    fn overlay_empty_boxes_is_gray_replication() {
        let img = GrayImage::from_raw(2, 2, vec![1, 2, 3, 4]);
        let rgb = render_overlay(&img, &[]).unwrap();
        for y in 0..2 {
            for x in 0..2 {
                let v = img.get(x, y);
                assert_eq!(rgb.get(x, y), (v, v, v));
            }
        }
    }

    #[test]
    fn overlay_full_image_box_is_all_red() {
        let img = GrayImage::filled(2, 2, 9);
        let rgb = render_overlay(&img, &[Rect::new(0, 0, 2, 2)]).unwrap();
        for y in 0..2 {
            for x in 0..2 {
                assert_eq!(rgb.get(x, y), (255, 0, 0));
            }
        }
    }

    #[test]
    fn overlay_perimeter_pixel_count() {
        // 3x3 box outline = 8 perimeter pixels; everything else untouched.
        let img = GrayImage::filled(5, 5, 128);
        let rgb = render_overlay(&img, &[Rect::new(1, 1, 3, 3)]).unwrap();
        let red = (0..5)
            .flat_map(|y| (0..5).map(move |x| (x, y)))
            .filter(|&(x, y)| rgb.get(x, y) == (255, 0, 0))
            .count();
        assert_eq!(red, 8);
        assert_eq!(rgb.get(2, 2), (128, 128, 128));
        assert_eq!(rgb.get(0, 0), (128, 128, 128));
    }

    #[test]
    fn overlay_rejects_out_of_bounds() {
        let img = GrayImage::filled(4, 4, 0);
        let err = render_overlay(&img, &[Rect::new(0, 0, 4, 4), Rect::new(2, 2, 3, 1)]);
        assert_eq!(err, Err(BoxOutOfBounds { index: 1 }));
    }

    #[test]
    fn rect_intersection() {
        let a = Rect::new(0, 0, 4, 4);
        let b = Rect::new(2, 2, 4, 4);
        assert_eq!(a.intersection_area(&b), 4);
        assert_eq!(a.intersection_area(&Rect::new(4, 0, 2, 2)), 0);
    }

    #[test]
    fn ink_bbox_is_tight() {
        let mut m = InkMask::new(5, 4);
        m.set(1, 2, true);
        m.set(3, 1, true);
        assert_eq!(m.ink_bbox(), Some(Rect::new(1, 1, 3, 2)));
        assert_eq!(InkMask::new(2, 2).ink_bbox(), None);
    }
}
