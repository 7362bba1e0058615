//! Synthetic shapes for tests, fixtures and the demo.

use crate::labeling::Region;
use crate::raster::BinaryMap;

/// One-pixel outline of the `w`×`h` rectangle with top-left `(x, y)`.
pub fn rect_outline(x: i64, y: i64, w: i64, h: i64) -> Region {
    let mut px = Vec::new();
    for i in 0..w {
        for j in 0..h {
            if i == 0 || j == 0 || i == w - 1 || j == h - 1 {
                px.push((x + i, y + j));
            }
        }
    }
    Region::from_pixels(1, &px)
}

pub fn filled_rect(x: i64, y: i64, w: i64, h: i64) -> Region {
    let px: Vec<_> = (0..h).flat_map(|j| (0..w).map(move |i| (x + i, y + j))).collect();
    Region::from_pixels(1, &px)
}

/// Pixels within Euclidean distance `r` of the center.
pub fn disk(cx: i64, cy: i64, r: i64) -> Region {
    let mut px = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                px.push((cx + dx, cy + dy));
            }
        }
    }
    Region::from_pixels(1, &px)
}

/// Midpoint-algorithm circle outline.
pub fn circle_outline(cx: i64, cy: i64, r: i64) -> Region {
    let mut px = Vec::new();
    let (mut x, mut y, mut err) = (r, 0i64, 1 - r);
    while x >= y {
        for (dx, dy) in [(x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)] {
            px.push((cx + dx, cy + dy));
        }
        y += 1;
        if err < 0 {
            err += 2 * y + 1;
        } else {
            x -= 1;
            err += 2 * (y - x) + 1;
        }
    }
    px.sort_unstable();
    px.dedup();
    Region::from_pixels(1, &px)
}

/// Paints regions into a `width`×`height` map; pixels outside are dropped.
pub fn paint(width: usize, height: usize, regions: &[Region]) -> BinaryMap {
    let mut map = BinaryMap::empty(width, height);
    for r in regions {
        for (x, y) in r.pixels() {
            if x >= 0 && y >= 0 && (x as usize) < width && (y as usize) < height {
                map.set(x as usize, y as usize, true);
            }
        }
    }
    map
}
