//! Row generation inside a region.
//!
//! Coil rows sit on bands of width `W` stacked from the region's minimum `y`.
//! Each row's travel length is the band area divided by `W`, so the spanned
//! volume of the coil rows equals the covered area times the layer height.
//! The strip above the last full band is left for dense plotting.

use crate::geometry::{Area, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct CoilRows {
    pub rows: Vec<[Point; 2]>,
    /// Area of the full bands.
    pub covered_area: f64,
    /// `y` where the uncovered strip starts.
    pub covered_top: f64,
}

pub fn coil_rows(area: &Area, w: f64) -> CoilRows {
    let (y0, y1) = area.y_range();
    let bands = ((y1 - y0) / w + 1e-9).floor() as usize;
    let mut rows = Vec::new();
    let mut covered_area = 0.0;
    for k in 0..bands {
        let lo = y0 + k as f64 * w;
        let hi = lo + w;
        let yc = lo + 0.5 * w;
        let band_area = area.slab_area(lo, hi);
        let intervals = area.intervals_at(yc);
        let chord: f64 = intervals.iter().map(|(a, b)| b - a).sum();
        if chord <= 0.0 || band_area <= 0.0 {
            continue;
        }
        covered_area += band_area;
        let scale = band_area / w / chord;
        let mut segs: Vec<[Point; 2]> = intervals
            .iter()
            .map(|&(a, b)| {
                let mid = 0.5 * (a + b);
                let half = 0.5 * scale * (b - a);
                [[mid - half, yc], [mid + half, yc]]
            })
            .collect();
        if k % 2 == 1 {
            segs.reverse();
            for s in segs.iter_mut() {
                s.swap(0, 1);
            }
        }
        rows.extend(segs);
    }
    CoilRows {
        rows,
        covered_area,
        covered_top: y0 + bands as f64 * w,
    }
}

/// Serpentine scan lines at roughly `pitch` spacing between `y_lo` and `y_hi`.
pub fn dense_rows(area: &Area, y_lo: f64, y_hi: f64, pitch: f64) -> Vec<[Point; 2]> {
    let span = y_hi - y_lo;
    if span <= 0.0 {
        return Vec::new();
    }
    let lines = ((span / pitch).round() as usize).max(1);
    let step = span / lines as f64;
    let mut rows = Vec::new();
    let mut flip = false;
    for j in 0..lines {
        let y = y_lo + (j as f64 + 0.5) * step;
        let mut segs: Vec<[Point; 2]> = area
            .intervals_at(y)
            .into_iter()
            .filter(|(a, b)| b > a)
            .map(|(a, b)| [[a, y], [b, y]])
            .collect();
        if segs.is_empty() {
            continue;
        }
        if flip {
            segs.reverse();
            for s in segs.iter_mut() {
                s.swap(0, 1);
            }
        }
        flip = !flip;
        rows.extend(segs);
    }
    rows
}

pub fn length(rows: &[[Point; 2]]) -> f64 {
    rows.iter()
        .map(|[a, b]| crate::geometry::distance(*a, *b))
        .sum()
}
