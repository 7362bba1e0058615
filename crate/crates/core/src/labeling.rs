//! Connected-component labeling by flood filling.
//!
//! Three traversal strategies are provided: recursive, iterative
//! depth-first with an explicit stack, and iterative breadth-first with a
//! queue. All use 8-connectivity and assign labels in first-encounter order
//! of a row-major scan, so they produce identical label maps.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::BBox;
use crate::raster::BinaryMap;

/// Largest input (in pixels) accepted by [`flood_fill_recursive`].
pub const RECURSIVE_PIXEL_LIMIT: usize = 4096;

const NEIGHBORS_8: [(i64, i64); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    label_count: u32,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label_count(&self) -> u32 {
        self.label_count
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Renumbers labels by first appearance in a row-major scan.
    pub fn canonicalize(&self) -> LabelMap {
        let mut remap = vec![0u32; self.label_count as usize + 1];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if l == 0 {
                    return 0;
                }
                if remap[l as usize] == 0 {
                    next += 1;
                    remap[l as usize] = next;
                }
                remap[l as usize]
            })
            .collect();
        LabelMap { width: self.width, height: self.height, labels, label_count: next }
    }
}

/// Which traversal a flood fill uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillStrategy {
    Recursive,
    DepthFirst,
    BreadthFirst,
}

/// Labels foreground components with the given strategy.
pub fn flood_fill(binary: &BinaryMap, strategy: FillStrategy) -> Result<LabelMap> {
    match strategy {
        FillStrategy::Recursive => flood_fill_recursive(binary),
        FillStrategy::DepthFirst => Ok(flood_fill_dfs(binary)),
        FillStrategy::BreadthFirst => Ok(flood_fill_bfs(binary)),
    }
}

struct Filler<'a> {
    binary: &'a BinaryMap,
    labels: Vec<u32>,
}

impl Filler<'_> {
    fn neighbors(&self, x: usize, y: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (w, h) = (self.binary.width() as i64, self.binary.height() as i64);
        NEIGHBORS_8.iter().filter_map(move |&(dx, dy)| {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            (nx >= 0 && ny >= 0 && nx < w && ny < h).then_some((nx as usize, ny as usize))
        })
    }

    fn is_unlabeled_foreground(&self, x: usize, y: usize) -> bool {
        let i = y * self.binary.width() + x;
        self.binary.data()[i] && self.labels[i] == 0
    }

    fn mark(&mut self, x: usize, y: usize, label: u32) {
        let i = y * self.binary.width() + x;
        self.labels[i] = label;
    }

    fn run(mut self, mut fill: impl FnMut(&mut Self, usize, usize, u32)) -> LabelMap {
        let (w, h) = (self.binary.width(), self.binary.height());
        let mut next = 0;
        for y in 0..h {
            for x in 0..w {
                if self.is_unlabeled_foreground(x, y) {
                    next += 1;
                    fill(&mut self, x, y, next);
                }
            }
        }
        LabelMap { width: w, height: h, labels: self.labels, label_count: next }
    }

    fn fill_recursive(&mut self, x: usize, y: usize, label: u32) {
        self.mark(x, y, label);
        let ns: Vec<_> = self.neighbors(x, y).collect();
        for (nx, ny) in ns {
            if self.is_unlabeled_foreground(nx, ny) {
                self.fill_recursive(nx, ny, label);
            }
        }
    }
}

fn filler(binary: &BinaryMap) -> Filler<'_> {
    Filler { binary, labels: vec![0; binary.width() * binary.height()] }
}

/// Breadth-first flood fill; the production default.
pub fn flood_fill_bfs(binary: &BinaryMap) -> LabelMap {
    let mut queue = VecDeque::new();
    filler(binary).run(|f, x, y, label| {
        f.mark(x, y, label);
        queue.push_back((x, y));
        while let Some((cx, cy)) = queue.pop_front() {
            let ns: Vec<_> = f.neighbors(cx, cy).collect();
            for (nx, ny) in ns {
                if f.is_unlabeled_foreground(nx, ny) {
                    f.mark(nx, ny, label);
                    queue.push_back((nx, ny));
                }
            }
        }
    })
}

/// Depth-first flood fill over an explicit stack.
pub fn flood_fill_dfs(binary: &BinaryMap) -> LabelMap {
    let mut stack = Vec::new();
    filler(binary).run(|f, x, y, label| {
        stack.push((x, y));
        while let Some((cx, cy)) = stack.pop() {
            if !f.is_unlabeled_foreground(cx, cy) {
                continue;
            }
            f.mark(cx, cy, label);
            let ns: Vec<_> = f.neighbors(cx, cy).collect();
            for (nx, ny) in ns {
                if f.is_unlabeled_foreground(nx, ny) {
                    stack.push((nx, ny));
                }
            }
        }
    })
}

/// Recursive flood fill. Recursion depth grows with region size, so inputs
/// above [`RECURSIVE_PIXEL_LIMIT`] pixels are refused.
pub fn flood_fill_recursive(binary: &BinaryMap) -> Result<LabelMap> {
    let pixels = binary.width() * binary.height();
    if pixels > RECURSIVE_PIXEL_LIMIT {
        return Err(Error::TooLarge { pixels, limit: RECURSIVE_PIXEL_LIMIT });
    }
    Ok(filler(binary).run(|f, x, y, label| f.fill_recursive(x, y, label)))
}

/// One labeled component with a mask cropped to its bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub label: u32,
    pub bbox: BBox,
    pub pixel_count: usize,
    mask: Vec<bool>,
}

impl Region {
    /// Builds a region from a mask covering `bbox` (row-major, bbox-sized).
    pub fn from_mask(label: u32, bbox: BBox, mask: Vec<bool>) -> Self {
        assert_eq!(mask.len() as i64, bbox.area(), "mask must cover the bounding box");
        let pixel_count = mask.iter().filter(|&&b| b).count();
        Region { label, bbox, pixel_count, mask }
    }

    /// Tight region from absolute pixel coordinates.
    pub fn from_pixels(label: u32, pixels: &[(i64, i64)]) -> Self {
        assert!(!pixels.is_empty(), "region needs at least one pixel");
        let mut bbox = BBox::point(pixels[0].0, pixels[0].1);
        for &(x, y) in pixels {
            bbox = bbox.union(&BBox::point(x, y));
        }
        let mut mask = vec![false; bbox.area() as usize];
        for &(x, y) in pixels {
            mask[((y - bbox.min_y) * bbox.width() + (x - bbox.min_x)) as usize] = true;
        }
        Self::from_mask(label, bbox, mask)
    }

    /// Membership by absolute coordinates; false outside the bbox.
    pub fn contains(&self, x: i64, y: i64) -> bool {
        if !self.bbox.contains_point(x as f64, y as f64) {
            return false;
        }
        self.mask[((y - self.bbox.min_y) * self.bbox.width() + (x - self.bbox.min_x)) as usize]
    }

    /// Membership relative to the bbox origin.
    pub fn local(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && x < self.bbox.width()
            && y < self.bbox.height()
            && self.mask[(y * self.bbox.width() + x) as usize]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Region {
        Region { bbox: self.bbox.translate(dx, dy), ..self.clone() }
    }

    pub fn pixels(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let w = self.bbox.width();
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| (self.bbox.min_x + i as i64 % w, self.bbox.min_y + i as i64 / w))
    }
}

/// One [`Region`] per label, in label order.
pub fn extract_regions(lm: &LabelMap) -> Vec<Region> {
    let n = lm.label_count as usize;
    let mut boxes: Vec<Option<BBox>> = vec![None; n + 1];
    for y in 0..lm.height {
        for x in 0..lm.width {
            let l = lm.get(x, y) as usize;
            if l == 0 {
                continue;
            }
            let p = BBox::point(x as i64, y as i64);
            boxes[l] = Some(boxes[l].map_or(p, |b| b.union(&p)));
        }
    }
    boxes
        .into_iter()
        .enumerate()
        .skip(1)
        .filter_map(|(l, b)| b.map(|b| (l as u32, b)))
        .map(|(label, bbox)| {
            let mut mask = Vec::with_capacity(bbox.area() as usize);
            for y in bbox.min_y..=bbox.max_y {
                for x in bbox.min_x..=bbox.max_x {
                    mask.push(lm.get(x as usize, y as usize) == label);
                }
            }
            Region::from_mask(label, bbox, mask)
        })
        .collect()
}

/// Labels with breadth-first fill and extracts the regions.
pub fn label_regions(binary: &BinaryMap) -> Vec<Region> {
    extract_regions(&flood_fill_bfs(binary))
}
