//! Small integer geometry shared by every stage.

use serde::{Deserialize, Serialize};

/// Origin-and-size rectangle, as passed to `getImageData`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub width: i64,
    pub height: i64,
}

impl Rect {
    pub fn new(x: i64, y: i64, width: i64, height: i64) -> Self {
        Self { x, y, width, height }
    }
}

/// Inclusive pixel bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BBox {
    pub min_x: i64,
    pub min_y: i64,
    pub max_x: i64,
    pub max_y: i64,
}

impl BBox {
    pub fn new(min_x: i64, min_y: i64, max_x: i64, max_y: i64) -> Self {
        debug_assert!(min_x <= max_x && min_y <= max_y);
        Self { min_x, min_y, max_x, max_y }
    }

    pub fn point(x: i64, y: i64) -> Self {
        Self::new(x, y, x, y)
    }

    pub fn width(&self) -> i64 {
        self.max_x - self.min_x + 1
    }

    pub fn height(&self) -> i64 {
        self.max_y - self.min_y + 1
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }

    /// Center in continuous pixel coordinates.
    pub fn center(&self) -> (f64, f64) {
        (
            (self.min_x + self.max_x) as f64 / 2.0,
            (self.min_y + self.max_y) as f64 / 2.0,
        )
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        x >= self.min_x as f64 && x <= self.max_x as f64 && y >= self.min_y as f64 && y <= self.max_y as f64
    }

    /// `other` lies within `self`, boundaries may touch.
    pub fn contains(&self, other: &BBox) -> bool {
        other.min_x >= self.min_x
            && other.min_y >= self.min_y
            && other.max_x <= self.max_x
            && other.max_y <= self.max_y
    }

    /// `other` lies within `self` without touching any edge.
    pub fn strictly_contains(&self, other: &BBox) -> bool {
        other.min_x > self.min_x
            && other.min_y > self.min_y
            && other.max_x < self.max_x
            && other.max_y < self.max_y
    }

    pub fn intersects(&self, other: &BBox) -> bool {
        self.min_x <= other.max_x
            && other.min_x <= self.max_x
            && self.min_y <= other.max_y
            && other.min_y <= self.max_y
    }

    /// Grows (or shrinks, for negative `by`) every side. Shrinking past a
    /// single pixel collapses to the center.
    pub fn expand(&self, by: i64) -> BBox {
        let (mut a, mut b) = (self.min_x - by, self.max_x + by);
        let (mut c, mut d) = (self.min_y - by, self.max_y + by);
        if a > b {
            a = (self.min_x + self.max_x) / 2;
            b = a;
        }
        if c > d {
            c = (self.min_y + self.max_y) / 2;
            d = c;
        }
        BBox::new(a, c, b, d)
    }

    pub fn union(&self, other: &BBox) -> BBox {
        BBox::new(
            self.min_x.min(other.min_x),
            self.min_y.min(other.min_y),
            self.max_x.max(other.max_x),
            self.max_y.max(other.max_y),
        )
    }

    pub fn translate(&self, dx: i64, dy: i64) -> BBox {
        BBox::new(self.min_x + dx, self.min_y + dy, self.max_x + dx, self.max_y + dy)
    }
}

/// Chebyshev (chessboard) distance between two pixel positions.
pub fn chebyshev(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extents_are_inclusive() {
        let b = BBox::new(2, 2, 4, 4);
        assert_eq!((b.width(), b.height(), b.area()), (3, 3, 9));
        assert_eq!(b.center(), (3.0, 3.0));
    }

    #[test]
    fn strict_containment_excludes_touching_edges() {
        let outer = BBox::new(0, 0, 10, 10);
        assert!(outer.contains(&BBox::new(0, 1, 5, 5)));
        assert!(!outer.strictly_contains(&BBox::new(0, 1, 5, 5)));
        assert!(outer.strictly_contains(&BBox::new(1, 1, 9, 9)));
    }

    #[test]
    fn shrinking_collapses_to_center() {
        let b = BBox::new(0, 0, 2, 6).expand(-3);
        assert_eq!(b, BBox::new(1, 3, 1, 3));
    }
}
