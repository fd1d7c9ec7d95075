//! Planar helpers for region filling on convex polygons with an optional
//! convex hole.

use std::f64::consts::PI;

pub type Point = [f64; 2];

/// Vertex count used to approximate circles.
pub const CIRCLE_SEGMENTS: usize = 256;

pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let [x0, y0] = poly[i];
        let [x1, y1] = poly[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc
}

pub fn area(poly: &[Point]) -> f64 {
    signed_area(poly).abs()
}

/// Counter-clockwise copy of `poly`.
pub fn ccw(mut poly: Vec<Point>) -> Vec<Point> {
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

pub fn circle(center: Point, r: f64) -> Vec<Point> {
    (0..CIRCLE_SEGMENTS)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / CIRCLE_SEGMENTS as f64;
            [center[0] + r * t.cos(), center[1] + r * t.sin()]
        })
        .collect()
}

/// Keep the part of `poly` where `normal · p <= offset` (Sutherland–Hodgman).
pub fn clip_half_plane(poly: &[Point], normal: Point, offset: f64) -> Vec<Point> {
    let side = |p: &Point| normal[0] * p[0] + normal[1] * p[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (sa, sb) = (side(&a), side(&b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    if out.len() < 3 {
        out.clear();
    }
    out
}

/// Intersection of two convex polygons.
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let clip = ccw(clip.to_vec());
    let mut out = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        // outward normal of a ccw edge
        let normal = [b[1] - a[1], a[0] - b[0]];
        let offset = normal[0] * a[0] + normal[1] * a[1];
        out = clip_half_plane(&out, normal, offset);
    }
    out
}

/// Part of `poly` with `y0 <= y <= y1`.
pub fn clip_slab(poly: &[Point], y0: f64, y1: f64) -> Vec<Point> {
    let lower = clip_half_plane(poly, [0.0, -1.0], -y0);
    clip_half_plane(&lower, [0.0, 1.0], y1)
}

pub fn is_convex(poly: &[Point]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if cross.abs() < 1e-12 {
            continue;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    sign != 0.0
}

/// Minimum width of a convex polygon (smallest caliper distance over edges).
pub fn convex_width(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        if len < 1e-12 {
            continue;
        }
        let far = poly
            .iter()
            .map(|p| ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])).abs() / len)
            .fold(0.0, f64::max);
        best = best.min(far);
    }
    best
}

/// `x` extent where the horizontal line at `y` crosses a convex polygon.
pub fn convex_chord(poly: &[Point], y: f64) -> Option<(f64, f64)> {
    let n = poly.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (ymin, ymax) = (a[1].min(b[1]), a[1].max(b[1]));
        if y < ymin || y > ymax {
            continue;
        }
        if (b[1] - a[1]).abs() < 1e-15 {
            lo = lo.min(a[0].min(b[0]));
            hi = hi.max(a[0].max(b[0]));
        } else {
            let t = (y - a[1]) / (b[1] - a[1]);
            let x = a[0] + t * (b[0] - a[0]);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (hi > lo).then_some((lo, hi))
}

pub fn y_range(poly: &[Point]) -> (f64, f64) {
    poly.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p[1]), hi.max(p[1]))
        })
}

pub fn bounds(poly: &[Point]) -> (Point, Point) {
    poly.iter().fold(
        ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]),
        |(lo, hi), p| {
            (
                [lo[0].min(p[0]), lo[1].min(p[1])],
                [hi[0].max(p[0]), hi[1].max(p[1])],
            )
        },
    )
}

/// Quarter turns keep coordinates exact, which the 90° row alternation
/// relies on.
pub fn quarter_turn_cw(p: Point) -> Point {
    [p[1], -p[0]]
}

pub fn quarter_turn_ccw(p: Point) -> Point {
    [-p[1], p[0]]
}

pub fn distance(a: Point, b: Point) -> f64 {
    ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
}

/// A convex outline with an optional convex hole strictly inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Area {
    pub outer: Vec<Point>,
    pub hole: Option<Vec<Point>>,
}

impl Area {
    pub fn new(outer: Vec<Point>, hole: Option<Vec<Point>>) -> Self {
        Self {
            outer: ccw(outer),
            hole: hole.map(ccw),
        }
    }

    pub fn area(&self) -> f64 {
        area(&self.outer) - self.hole.as_deref().map_or(0.0, area)
    }

    pub fn y_range(&self) -> (f64, f64) {
        y_range(&self.outer)
    }

    pub fn slab_area(&self, y0: f64, y1: f64) -> f64 {
        let outer = area(&clip_slab(&self.outer, y0, y1));
        let hole = self
            .hole
            .as_deref()
            .map_or(0.0, |h| area(&clip_slab(h, y0, y1)));
        outer - hole
    }

    /// Sorted `x` intervals covered at height `y`.
    pub fn intervals_at(&self, y: f64) -> Vec<(f64, f64)> {
        let Some((a, b)) = convex_chord(&self.outer, y) else {
            return Vec::new();
        };
        match self.hole.as_deref().and_then(|h| convex_chord(h, y)) {
            Some((ha, hb)) if ha < b && hb > a => {
                let mut v = Vec::with_capacity(2);
                if ha > a {
                    v.push((a, ha));
                }
                if hb < b {
                    v.push((hb, b));
                }
                v
            }
            _ => vec![(a, b)],
        }
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Self {
        Self::new(
            self.outer.iter().map(|&p| f(p)).collect(),
            self.hole
                .as_ref()
                .map(|h| h.iter().map(|&p| f(p)).collect()),
        )
    }

    /// Overlap area with another region, by inclusion–exclusion over the
    /// convex pieces.
    pub fn overlap(&self, other: &Area) -> f64 {
        let inter = |a: &[Point], b: &[Point]| area(&clip_convex(a, b));
        let mut total = inter(&self.outer, &other.outer);
        if let Some(h) = &self.hole {
            total -= inter(h, &other.outer);
        }
        if let Some(h) = &other.hole {
            total -= inter(&self.outer, h);
        }
        if let (Some(a), Some(b)) = (&self.hole, &other.hole) {
            total += inter(a, b);
        }
        total
    }
}
