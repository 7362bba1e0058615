//! Laplacian response and zero-crossing edge extraction.

use crate::raster::{BinaryMap, GrayBuffer, Kernel3x3};

/// Binary edge map; `true` marks an edge pixel.
pub type EdgeMap = BinaryMap;

/// Default crossing strength on the 0-255 luma scale.
pub const DEFAULT_THRESHOLD: f64 = 8.0;

/// Laplacian of an already smoothed buffer.
pub fn log_response(buf: &GrayBuffer) -> GrayBuffer {
    buf.convolve3x3(&Kernel3x3::LAPLACIAN)
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Marks a pixel when a 4-neighbor has the opposite sign and the two
/// responses differ by more than `threshold`. Both pixels of such a pair
/// are marked. A pixel whose response is exactly zero and which touches
/// both a positive and a negative neighbor is always an edge.
pub fn zero_crossings(resp: &GrayBuffer, threshold: f64) -> EdgeMap {
    let (w, h) = (resp.width(), resp.height());
    BinaryMap::from_fn(w, h, |x, y| {
        let v = resp.get(x, y);
        let s = sign(v);
        let mut pos = false;
        let mut neg = false;
        for (dx, dy) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let n = resp.get(nx as usize, ny as usize);
            let ns = sign(n);
            if s != 0 && ns == -s && (v - n).abs() > threshold {
                return true;
            }
            pos |= ns > 0;
            neg |= ns < 0;
        }
        s == 0 && pos && neg
    })
}

/// Full edge stage: Laplacian then zero crossings.
pub fn detect_edges(smoothed: &GrayBuffer, threshold: f64) -> EdgeMap {
    zero_crossings(&log_response(smoothed), threshold)
}
