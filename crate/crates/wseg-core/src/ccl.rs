//! Connected-component labeling and per-component statistics.
//!
//! Two-pass union-find labeling; final labels are dense (1..=n) and assigned
//! in raster order of each component's first pixel, so results are stable
//! across runs and usable in golden tests.

use alloc::vec;
use alloc::vec::Vec;

use crate::raster::{InkMask, Rect};

/// Pixel adjacency rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

/// Per-pixel component labels; 0 is background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: u32,
    height: u32,
    data: Vec<u32>,
    count: u32,
}

impl LabelMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    /// Number of components; labels run 1..=count.
    pub fn count(&self) -> u32 {
        self.count
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u32 {
        self.data[y as usize * self.width as usize + x as usize]
    }

    /// Mask of the pixels carrying one label.
    pub fn mask_of(&self, label: u32) -> InkMask {
        InkMask::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|&l| l == label).collect(),
        )
    }
}

/// Which image borders a component touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Borders {
    pub left: bool,
    pub right: bool,
    pub top: bool,
    pub bottom: bool,
}

impl Borders {
    pub fn count(&self) -> u32 {
        self.left as u32 + self.right as u32 + self.top as u32 + self.bottom as u32
    }
}

/// One labeled component and its statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub label: u32,
    pub bbox: Rect,
    pub pixel_count: usize,
    pub touches: Borders,
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn new() -> Self {
        DisjointSets { parent: Vec::new() }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn root(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            // path halving
            let gp = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = gp;
            i = gp;
        }
        i
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.root(a);
        let rb = self.root(b);
        if ra != rb {
            // anchor on the smaller id so roots stay raster-ordered
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Label the connected components of `mask`.
pub fn label_components(mask: &InkMask, connectivity: Connectivity) -> LabelMap {
    let (w, h) = (mask.width() as usize, mask.height() as usize);
    let mut provisional = vec![0u32; w * h]; // provisional id + 1, 0 = background
    let mut sets = DisjointSets::new();

    for y in 0..h {
        for x in 0..w {
            if !mask.get(x as u32, y as u32) {
                continue;
            }
            // Already-scanned neighbors: W, N, and for 8-connectivity NW/NE.
            let eight = matches!(connectivity, Connectivity::Eight);
            let mut neighbor = [0u32; 4];
            let mut n_count = 0;
            let consider = |idx: usize, neighbor: &mut [u32; 4], n_count: &mut usize| {
                let p = provisional[idx];
                if p != 0 {
                    neighbor[*n_count] = p;
                    *n_count += 1;
                }
            };
            if x > 0 {
                consider(y * w + x - 1, &mut neighbor, &mut n_count);
            }
            if y > 0 {
                consider((y - 1) * w + x, &mut neighbor, &mut n_count);
                if eight && x > 0 {
                    consider((y - 1) * w + x - 1, &mut neighbor, &mut n_count);
                }
                if eight && x + 1 < w {
                    consider((y - 1) * w + x + 1, &mut neighbor, &mut n_count);
                }
            }
            let id = if n_count == 0 {
                sets.make() + 1
            } else {
                let min = *neighbor[..n_count].iter().min().unwrap();
                for &n in &neighbor[..n_count] {
                    sets.union(min - 1, n - 1);
                }
                min
            };
            provisional[y * w + x] = id;
        }
    }

    // Relabel roots densely in raster order of first occurrence.
    let mut final_of_root: Vec<u32> = vec![0; sets.parent.len()];
    let mut count = 0u32;
    let mut data = vec![0u32; w * h];
    for i in 0..w * h {
        let p = provisional[i];
        if p == 0 {
            continue;
        }
        let root = sets.root(p - 1) as usize;
        if final_of_root[root] == 0 {
            count += 1;
            final_of_root[root] = count;
        }
        data[i] = final_of_root[root];
    }

    LabelMap {
        width: mask.width(),
        height: mask.height(),
        data,
        count,
    }
}

/// Statistics for every component, in label order.
pub fn component_stats(lm: &LabelMap) -> Vec<Component> {
    let n = lm.count() as usize;
    let mut min_x = vec![u32::MAX; n];
    let mut min_y = vec![u32::MAX; n];
    let mut max_x = vec![0u32; n];
    let mut max_y = vec![0u32; n];
    let mut counts = vec![0usize; n];
    for y in 0..lm.height() {
        for x in 0..lm.width() {
            let l = lm.get(x, y);
            if l == 0 {
                continue;
            }
            let i = (l - 1) as usize;
            min_x[i] = min_x[i].min(x);
            min_y[i] = min_y[i].min(y);
            max_x[i] = max_x[i].max(x);
            max_y[i] = max_y[i].max(y);
            counts[i] += 1;
        }
    }
    (0..n)
        .map(|i| {
            let bbox = Rect::new(
                min_x[i],
                min_y[i],
                max_x[i] - min_x[i] + 1,
                max_y[i] - min_y[i] + 1,
            );
            Component {
                label: (i + 1) as u32,
                bbox,
                pixel_count: counts[i],
                touches: Borders {
                    left: bbox.x == 0,
                    top: bbox.y == 0,
                    right: bbox.x + bbox.w == lm.width(),
                    bottom: bbox.y + bbox.h == lm.height(),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn all_background_has_no_components() {
        let lm = label_components(&InkMask::new(4, 4), Connectivity::Eight);
        assert_eq!(lm.count(), 0);
        assert!(lm.data().iter().all(|&l| l == 0));
    }

    #[test]
    fn diagonal_pixels_connectivity() {
        let mut mask = InkMask::new(3, 3);
        mask.set(0, 0, true);
        mask.set(1, 1, true);
        assert_eq!(label_components(&mask, Connectivity::Eight).count(), 1);
        assert_eq!(label_components(&mask, Connectivity::Four).count(), 2);
    }

    #[test]
    fn labels_follow_raster_order() {
        // Two components; the one whose first pixel comes first in raster
        // order gets label 1.
        let mut mask = InkMask::new(4, 2);
        mask.set(3, 0, true);
        mask.set(0, 1, true);
        let lm = label_components(&mask, Connectivity::Four);
        assert_eq!(lm.get(3, 0), 1);
        assert_eq!(lm.get(0, 1), 2);
    }

    #[test]
    fn stairs_merge_under_union() {
        // A pattern forcing label equivalences to be resolved across rows.
        let mut mask = InkMask::new(5, 3);
        for x in [0u32, 2, 4] {
            mask.set(x, 0, true);
        }
        for x in 0..5 {
            mask.set(x, 1, true);
        }
        let lm = label_components(&mask, Connectivity::Four);
        assert_eq!(lm.count(), 1);
    }

    #[test]
    fn stats_singleton() {
        let mut mask = InkMask::new(5, 5);
        mask.set(2, 3, true);
        let comps = component_stats(&label_components(&mask, Connectivity::Eight));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].bbox, Rect::new(2, 3, 1, 1));
        assert_eq!(comps[0].pixel_count, 1);
        assert_eq!(comps[0].touches.count(), 0);
    }

    #[test]
    fn stats_full_first_row() {
        let mut mask = InkMask::new(4, 4);
        for x in 0..4 {
            mask.set(x, 0, true);
        }
        let comps = component_stats(&label_components(&mask, Connectivity::Eight));
        assert_eq!(comps[0].bbox, Rect::new(0, 0, 4, 1));
        assert_eq!(comps[0].pixel_count, 4);
        let t = comps[0].touches;
        assert!(t.left && t.right && t.top && !t.bottom);
    }

    /// Stack-based flood fill, the partition oracle.
    fn flood_fill_labels(mask: &InkMask, connectivity: Connectivity) -> Vec<u32> {
        let (w, h) = (mask.width() as i64, mask.height() as i64);
        let mut labels = vec![0u32; (w * h) as usize];
        let mut next = 0u32;
        let offsets: &[(i64, i64)] = match connectivity {
            Connectivity::Four => &[(-1, 0), (1, 0), (0, -1), (0, 1)],
            Connectivity::Eight => &[
                (-1, -1),
                (0, -1),
                (1, -1),
                (-1, 0),
                (1, 0),
                (-1, 1),
                (0, 1),
                (1, 1),
            ],
        };
        for start in 0..(w * h) {
            let (sx, sy) = (start % w, start / w);
            if !mask.get(sx as u32, sy as u32) || labels[start as usize] != 0 {
                continue;
            }
            next += 1;
            let mut stack = vec![(sx, sy)];
            labels[start as usize] = next;
            while let Some((x, y)) = stack.pop() {
                for &(dx, dy) in offsets {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let i = (ny * w + nx) as usize;
                    if mask.get(nx as u32, ny as u32) && labels[i] == 0 {
                        labels[i] = next;
                        stack.push((nx, ny));
                    }
                }
            }
        }
        labels
    }

    fn random_mask(rng: &mut StdRng) -> InkMask {
        let w = rng.gen_range(1..=48u32);
        let h = rng.gen_range(1..=48u32);
        let density: f64 = rng.gen();
        InkMask::from_raw(w, h, (0..w * h).map(|_| rng.gen_bool(density)).collect())
    }

    #[test]
    fn matches_flood_fill_partition() {
        let mut rng = StdRng::seed_from_u64(101);
        for _ in 0..40 {
            let mask = random_mask(&mut rng);
            for conn in [Connectivity::Four, Connectivity::Eight] {
                let lm = label_components(&mask, conn);
                let oracle = flood_fill_labels(&mask, conn);
                // The flood fill also visits in raster order, so labels must
                // agree exactly, not just up to renaming.
                assert_eq!(lm.data(), &oracle[..]);
            }
        }
    }

    #[test]
    fn pixel_count_conservation() {
        let mut rng = StdRng::seed_from_u64(202);
        for _ in 0..20 {
            let mask = random_mask(&mut rng);
            let lm = label_components(&mask, Connectivity::Eight);
            let comps = component_stats(&lm);
            let total: usize = comps.iter().map(|c| c.pixel_count).sum();
            assert_eq!(total, mask.count_ink());
        }
    }

    #[test]
    fn translation_invariance() {
        let mut rng = StdRng::seed_from_u64(303);
        let mask = random_mask(&mut rng);
        let (dx, dy) = (3u32, 2u32);
        let mut shifted = InkMask::new(mask.width() + 6, mask.height() + 5);
        for (x, y) in mask.ink_pixels() {
            shifted.set(x + dx, y + dy, true);
        }
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let a = label_components(&mask, conn);
            let b = label_components(&shifted, conn);
            assert_eq!(a.count(), b.count());
            for (x, y) in mask.ink_pixels() {
                assert_eq!(a.get(x, y), b.get(x + dx, y + dy));
            }
        }
    }
}
