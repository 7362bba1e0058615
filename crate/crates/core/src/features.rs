//! Per-region shape descriptors.
//!
//! A region from the outline labeling pass is summarized by a
//! nine-dimensional [`FeatureVector`]: line statistics from the two 3×3
//! line filters, right-angle count, the 0/10/20 interior-label code, area
//! compliance with square, circle and rectangle models, and the equality
//! of the X and Y extents.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::chebyshev;
use crate::labeling::Region;
use crate::raster::{GrayBuffer, Kernel3x3};

/// Minimum line-filter response for a pixel to count as a line pixel.
pub const LINE_RESPONSE_MIN: f64 = 4.0;
/// Shortest run of line pixels reported as a segment.
pub const MIN_LINE_LENGTH: i64 = 4;
/// Two segments are "equal" when their lengths differ by at most this.
pub const EQUAL_LENGTH_TOLERANCE: i64 = 2;
/// Endpoint distance (Chebyshev) under which two segments are adjacent.
pub const ADJACENCY_TOLERANCE: i64 = 3;
/// Interior components must stay this far inside the outline's bbox; the
/// widget's own stroke sits closer than that.
pub const LETTER_MARGIN: i64 = 3;
/// Interior components must be smaller than this share of the filled area.
pub const LETTER_AREA_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSegment {
    pub orientation: Orientation,
    pub start: (i64, i64),
    pub end: (i64, i64),
    pub length: i64,
}

impl LineSegment {
    fn endpoints(&self) -> [(i64, i64); 2] {
        [self.start, self.end]
    }

    /// Smallest Chebyshev distance between an endpoint of `self` and one of `other`.
    pub fn endpoint_gap(&self, other: &LineSegment) -> i64 {
        self.endpoints()
            .iter()
            .flat_map(|a| other.endpoints().map(|b| chebyshev(*a, b)))
            .min()
            .unwrap()
    }
}

/// Mask padded by one background pixel so filters see the region outline.
fn padded_mask(region: &Region) -> GrayBuffer {
    let (w, h) = (region.bbox.width() as usize + 2, region.bbox.height() as usize + 2);
    GrayBuffer::from_fn(w, h, |x, y| if region.local(x as i64 - 1, y as i64 - 1) { 1.0 } else { 0.0 })
        .expect("padded mask is nonempty")
}

/// Finds straight horizontal and vertical runs in the region mask.
/// Horizontal segments come first (by row, then column), then vertical
/// ones (by column, then row).
pub fn detect_lines(region: &Region) -> Vec<LineSegment> {
    detect_lines_min(region, MIN_LINE_LENGTH)
}

/// Shortest segment that counts as a side of `region`: a quarter of its
/// shorter extent, and never below [`MIN_LINE_LENGTH`]. The flat runs at
/// the poles of a rasterized circle grow only with the square root of the
/// radius, so they stay under this bound at every size.
pub fn side_length_floor(region: &Region) -> i64 {
    (region.bbox.width().min(region.bbox.height()) / 4).max(MIN_LINE_LENGTH)
}

/// [`detect_lines`] with an explicit minimum run length.
pub fn detect_lines_min(region: &Region, min_length: i64) -> Vec<LineSegment> {
    let mask = padded_mask(region);
    let (ox, oy) = (region.bbox.min_x - 1, region.bbox.min_y - 1);
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut lines = Vec::new();

    let horizontal = mask.convolve3x3(&Kernel3x3::HORIZONTAL_LINE);
    for y in 0..h {
        let mut x = 0;
        while x < w {
            if horizontal.get(x as usize, y as usize) >= LINE_RESPONSE_MIN {
                let start = x;
                while x < w && horizontal.get(x as usize, y as usize) >= LINE_RESPONSE_MIN {
                    x += 1;
                }
                let length = x - start;
                if length >= min_length {
                    lines.push(LineSegment {
                        orientation: Orientation::Horizontal,
                        start: (ox + start, oy + y),
                        end: (ox + x - 1, oy + y),
                        length,
                    });
                }
            } else {
                x += 1;
            }
        }
    }

    let vertical = mask.convolve3x3(&Kernel3x3::VERTICAL_LINE);
    for x in 0..w {
        let mut y = 0;
        while y < h {
            if vertical.get(x as usize, y as usize) >= LINE_RESPONSE_MIN {
                let start = y;
                while y < h && vertical.get(x as usize, y as usize) >= LINE_RESPONSE_MIN {
                    y += 1;
                }
                let length = y - start;
                if length >= min_length {
                    lines.push(LineSegment {
                        orientation: Orientation::Vertical,
                        start: (ox + x, oy + start),
                        end: (ox + x, oy + y - 1),
                        length,
                    });
                }
            } else {
                y += 1;
            }
        }
    }
    lines
}

/// Counts horizontal/vertical pairs whose endpoints meet within
/// [`ADJACENCY_TOLERANCE`].
pub fn count_right_angles(lines: &[LineSegment]) -> usize {
    let (hs, vs): (Vec<&LineSegment>, Vec<&LineSegment>) = lines.iter().partition(|l| l.orientation == Orientation::Horizontal);
    hs.iter()
        .map(|h| vs.iter().filter(|v| h.endpoint_gap(v) <= ADJACENCY_TOLERANCE).count())
        .sum()
}

/// Returns `(equal, adjacent_equal)` pair counts.
pub fn count_equal_and_adjacent_lines(lines: &[LineSegment]) -> (usize, usize) {
    let mut equal = 0;
    let mut adjacent = 0;
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if (a.length - b.length).abs() <= EQUAL_LENGTH_TOLERANCE {
                equal += 1;
                if a.endpoint_gap(b) <= ADJACENCY_TOLERANCE {
                    adjacent += 1;
                }
            }
        }
    }
    (equal, adjacent)
}

/// Region mask with enclosed holes filled: every bbox cell that cannot reach
/// the outside of the bbox through 4-connected background.
pub fn filled_interior(region: &Region) -> Vec<bool> {
    let (w, h) = (region.bbox.width(), region.bbox.height());
    let idx = |x: i64, y: i64| (y * w + x) as usize;
    let mut outside = vec![false; (w * h) as usize];
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            let border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
            if border && !region.local(x, y) {
                outside[idx(x, y)] = true;
                queue.push_back((x, y));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for (nx, ny) in [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)] {
            if nx < 0 || ny < 0 || nx >= w || ny >= h {
                continue;
            }
            if !outside[idx(nx, ny)] && !region.local(nx, ny) {
                outside[idx(nx, ny)] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    outside.into_iter().map(|o| !o).collect()
}

pub fn filled_area(region: &Region) -> usize {
    filled_interior(region).into_iter().filter(|&b| b).count()
}

/// Which closed-form area the region was compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaModel {
    Rectangle,
    Ellipse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    /// Pixels in the region mask.
    pub pixel_count: usize,
    /// Pixels in the mask with holes filled.
    pub filled_count: usize,
    pub model: AreaModel,
    pub analytic_area: f64,
    /// `min/max` of the filled count and the analytic area.
    pub agreement: f64,
}

/// Area counted from pixels and again from the bbox formula. Near-square
/// extents with empty bbox corners use the ellipse formula, everything
/// else the rectangle formula.
pub fn region_area(region: &Region) -> AreaEstimate {
    let filled = filled_interior(region);
    let filled_count = filled.iter().filter(|&&b| b).count();
    let (w, h) = (region.bbox.width(), region.bbox.height());
    let corners = [0, (w - 1) as usize, ((h - 1) * w) as usize, (h * w - 1) as usize];
    let corners_empty = corners.iter().all(|&i| !filled[i]);
    let model = if extent_equality(region) >= 0.8 && corners_empty {
        AreaModel::Ellipse
    } else {
        AreaModel::Rectangle
    };
    let analytic_area = match model {
        AreaModel::Rectangle => (w * h) as f64,
        AreaModel::Ellipse => PI * (w as f64 / 2.0) * (h as f64 / 2.0),
    };
    AreaEstimate {
        pixel_count: region.pixel_count,
        filled_count,
        model,
        analytic_area,
        agreement: ratio(filled_count as f64, analytic_area),
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi <= 0.0 {
        1.0
    } else {
        (lo / hi).clamp(0.0, 1.0)
    }
}

/// `min(w,h) / max(w,h)` of the bbox extents.
pub fn extent_equality(region: &Region) -> f64 {
    ratio(region.bbox.width() as f64, region.bbox.height() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeCompliance {
    pub square: f64,
    pub circle: f64,
    pub rect: f64,
}

/// Agreement of the filled area with the square, circle and rectangle
/// spanned by the bbox. Square and circle are weighted by the aspect
/// ratio; rectangle is weighted by how far the aspect ratio is from 1,
/// saturating at 2:1, so it is suppressed for square extents.
pub fn shape_compliance(region: &Region) -> ShapeCompliance {
    let area = filled_area(region) as f64;
    let (w, h) = (region.bbox.width() as f64, region.bbox.height() as f64);
    let aspect = extent_equality(region);
    let box_fit = ratio(area, w * h);
    let disk_fit = ratio(area, PI * w * h / 4.0);
    ShapeCompliance {
        square: (aspect * box_fit).clamp(0.0, 1.0),
        circle: (aspect * disk_fit).clamp(0.0, 1.0),
        rect: (box_fit * (2.0 * (1.0 - aspect)).clamp(0.0, 1.0)).clamp(0.0, 1.0),
    }
}

/// Interior components of `region` that count as labels: strictly inside
/// the bbox by at least [`LETTER_MARGIN`] and smaller than
/// [`LETTER_AREA_FRACTION`] of the filled area.
pub fn interior_labels<'a>(region: &Region, candidates: &'a [Region]) -> Vec<&'a Region> {
    let inner = region.bbox.expand(-LETTER_MARGIN);
    let limit = LETTER_AREA_FRACTION * filled_area(region) as f64;
    candidates
        .iter()
        .filter(|c| {
            region.bbox.strictly_contains(&c.bbox) && inner.contains(&c.bbox) && (c.pixel_count as f64) < limit
        })
        .collect()
}

/// 0 for no interior label, 10 for exactly one, 20 for more.
pub fn label_count_code(region: &Region, letter_regions: &[Region]) -> u8 {
    match interior_labels(region, letter_regions).len() {
        0 => 0,
        1 => 10,
        _ => 20,
    }
}

/// The nine-dimensional descriptor of one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub num_lines: u32,
    pub num_equal_lines: u32,
    pub num_adjacent_equal_lines: u32,
    pub num_right_angles: u32,
    pub label_count_code: u8,
    pub square_compliance: f64,
    pub circle_compliance: f64,
    pub rect_compliance: f64,
    pub xy_extent_equality: f64,
}

impl FeatureVector {
    pub const DIMENSIONS: usize = 9;

    pub const NAMES: [&'static str; Self::DIMENSIONS] = [
        "num_lines",
        "num_equal_lines",
        "num_adjacent_equal_lines",
        "num_right_angles",
        "label_count_code",
        "square_compliance",
        "circle_compliance",
        "rect_compliance",
        "xy_extent_equality",
    ];

    pub fn to_array(&self) -> [f64; Self::DIMENSIONS] {
        [
            self.num_lines as f64,
            self.num_equal_lines as f64,
            self.num_adjacent_equal_lines as f64,
            self.num_right_angles as f64,
            self.label_count_code as f64,
            self.square_compliance,
            self.circle_compliance,
            self.rect_compliance,
            self.xy_extent_equality,
        ]
    }
}

/// Assembles every descriptor for an outline region. `letter_regions`
/// come from the dark-pixel labeling pass.
/// Region pixels that touch the exterior background through a 4-neighbor
/// (or the bbox border). For a closed stroke this is its outermost contour,
/// without inner rings or enclosed glyph edges.
pub fn outer_boundary(region: &Region) -> Region {
    let (w, h) = (region.bbox.width(), region.bbox.height());
    let inside = filled_interior(region);
    let exterior = |x: i64, y: i64| x < 0 || y < 0 || x >= w || y >= h || !inside[(y * w + x) as usize];
    let mask = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .map(|(x, y)| {
            region.local(x, y)
                && [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)].into_iter().any(|(nx, ny)| exterior(nx, ny))
        })
        .collect();
    Region::from_mask(region.label, region.bbox, mask)
}

pub fn build_feature_vector(region: &Region, letter_regions: &[Region]) -> FeatureVector {
    let lines = detect_lines_min(&outer_boundary(region), side_length_floor(region));
    let (equal, adjacent) = count_equal_and_adjacent_lines(&lines);
    let compliance = shape_compliance(region);
    FeatureVector {
        num_lines: lines.len() as u32,
        num_equal_lines: equal as u32,
        num_adjacent_equal_lines: adjacent as u32,
        num_right_angles: count_right_angles(&lines) as u32,
        label_count_code: label_count_code(region, letter_regions),
        square_compliance: compliance.square,
        circle_compliance: compliance.circle,
        rect_compliance: compliance.rect,
        xy_extent_equality: extent_equality(region),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BBox;
    use crate::synth::{disk, filled_rect, rect_outline};

    #[test]
    fn square_outline_has_four_sides() {
        let r = rect_outline(0, 0, 10, 10);
        let lines = detect_lines(&r);
        assert_eq!(lines.len(), 4);
        let h: Vec<_> = lines.iter().filter(|l| l.orientation == Orientation::Horizontal).collect();
        assert_eq!(h.len(), 2);
        for l in &lines {
            assert_eq!(l.length, 8);
        }
        assert_eq!(h[0].start, (1, 0));
        assert_eq!(h[0].end, (8, 0));
        assert_eq!(count_right_angles(&lines), 4);
        assert_eq!(count_equal_and_adjacent_lines(&lines), (6, 4));
    }

    #[test]
    fn filled_disk_has_no_lines() {
        assert!(detect_lines(&disk(20, 20, 8)).is_empty());
    }

    #[test]
    fn short_run_is_not_a_line() {
        let r = Region::from_pixels(1, &[(0, 0), (1, 0), (2, 0)]);
        assert!(detect_lines(&r).is_empty());
    }

    #[test]
    fn right_angle_cases() {
        let h = |x0, x1, y| LineSegment {
            orientation: Orientation::Horizontal,
            start: (x0, y),
            end: (x1, y),
            length: x1 - x0 + 1,
        };
        let v = |x, y0, y1| LineSegment {
            orientation: Orientation::Vertical,
            start: (x, y0),
            end: (x, y1),
            length: y1 - y0 + 1,
        };
        assert_eq!(count_right_angles(&[h(0, 10, 0), h(0, 10, 5)]), 0);
        assert_eq!(count_right_angles(&[h(1, 10, 0), v(0, 1, 10)]), 1);
        assert_eq!(count_right_angles(&[h(5, 10, 0), v(0, 5, 10)]), 0);
        assert_eq!(count_equal_and_adjacent_lines(&[h(0, 9, 0), h(0, 29, 5)]), (0, 0));
        assert_eq!(count_equal_and_adjacent_lines(&[]), (0, 0));
    }

    #[test]
    fn area_of_filled_square_matches_exactly() {
        let a = region_area(&filled_rect(3, 4, 10, 10));
        assert_eq!(a.pixel_count, 100);
        assert_eq!(a.model, AreaModel::Rectangle);
        assert_eq!(a.analytic_area, 100.0);
        assert_eq!(a.agreement, 1.0);
    }

    #[test]
    fn outline_area_uses_filled_interior() {
        let a = region_area(&rect_outline(0, 0, 12, 12));
        assert_eq!(a.pixel_count, 44);
        assert_eq!(a.filled_count, 144);
        assert_eq!(a.agreement, 1.0);
    }

    #[test]
    fn disk_area_takes_ellipse_branch() {
        let d = disk(30, 30, 10);
        let a = region_area(&d);
        assert_eq!(a.model, AreaModel::Ellipse);
        assert!(a.agreement >= 0.9, "{a:?}");
    }

    #[test]
    fn thin_bar_takes_rectangle_branch() {
        let a = region_area(&filled_rect(0, 0, 20, 1));
        assert_eq!(a.model, AreaModel::Rectangle);
        assert_eq!(a.agreement, 1.0);
    }

    #[test]
    fn compliance_of_square_and_rectangle() {
        let sq = shape_compliance(&filled_rect(0, 0, 10, 10));
        assert_eq!(sq.square, 1.0);
        assert!((sq.circle - 25.0 * PI / 100.0).abs() < 1e-12);
        assert_eq!(sq.rect, 0.0);

        let rc = shape_compliance(&filled_rect(0, 0, 20, 10));
        assert_eq!(rc.square, 0.5);
        assert!(rc.rect > rc.square);
    }

    #[test]
    fn extent_equality_cases() {
        assert_eq!(extent_equality(&filled_rect(0, 0, 10, 10)), 1.0);
        assert_eq!(extent_equality(&filled_rect(0, 0, 20, 10)), 0.5);
        assert_eq!(extent_equality(&Region::from_pixels(1, &[(4, 4)])), 1.0);
    }

    #[test]
    fn label_codes() {
        let outline = rect_outline(0, 0, 40, 20);
        assert_eq!(label_count_code(&outline, &[]), 0);
        let check = filled_rect(15, 7, 6, 6);
        assert_eq!(label_count_code(&outline, std::slice::from_ref(&check)), 10);
        let o = filled_rect(10, 6, 5, 8);
        let k = filled_rect(18, 6, 5, 8);
        assert_eq!(label_count_code(&outline, &[o, k]), 20);
    }

    #[test]
    fn stroke_hugging_components_are_not_labels() {
        let outline = rect_outline(0, 0, 20, 20);
        // one pixel inside the outline: this is the widget's own stroke
        let stroke = rect_outline(1, 1, 18, 18);
        assert_eq!(label_count_code(&outline, &[stroke]), 0);
        // large interior blob exceeds the area fraction
        let big = rect_outline(0, 0, 40, 40);
        let blob = filled_rect(5, 5, 30, 30);
        assert_eq!(label_count_code(&big, &[blob]), 0);
        // touching the bbox edge is not strictly inside
        let edge = Region::from_pixels(1, &[(0, 5)]);
        assert_eq!(label_count_code(&outline, &[edge]), 0);
    }

    #[test]
    fn checkbox_outline_vector() {
        let fv = build_feature_vector(&rect_outline(5, 5, 12, 12), &[]);
        assert_eq!(fv.num_lines, 4);
        assert_eq!(fv.num_equal_lines, 6);
        assert_eq!(fv.num_adjacent_equal_lines, 4);
        assert_eq!(fv.num_right_angles, 4);
        assert_eq!(fv.label_count_code, 0);
        assert_eq!(fv.square_compliance, 1.0);
        assert_eq!(fv.xy_extent_equality, 1.0);
    }

    #[test]
    fn single_pixel_vector() {
        let fv = build_feature_vector(&Region::from_pixels(1, &[(3, 3)]), &[]);
        assert_eq!(fv.num_lines + fv.num_right_angles + fv.num_equal_lines, 0);
        assert_eq!(fv.label_count_code, 0);
        assert_eq!(fv.xy_extent_equality, 1.0);
        assert_eq!(fv.to_array().len(), FeatureVector::DIMENSIONS);
    }

    #[test]
    fn bbox_helpers_used_by_labels() {
        let r = rect_outline(0, 0, 10, 10);
        assert_eq!(r.bbox, BBox::new(0, 0, 9, 9));
    }
}
