//! Planar polyline utilities.

use nalgebra::Vector2;

pub type Point = Vector2<f64>;

/// `a × b` for planar vectors.
pub fn cross(a: &Point, b: &Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Shoelace area, positive for counter-clockwise rings. The ring is closed
/// implicitly.
pub fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|i| cross(&ring[i], &ring[(i + 1) % n])).sum::<f64>()
}

pub fn polyline_length(pts: &[Point], closed: bool) -> f64 {
    segments(pts.len(), closed).map(|(i, j)| (pts[j] - pts[i]).norm()).sum()
}

/// Index pairs of the segments of an open or closed polyline with `n` vertices.
pub fn segments(n: usize, closed: bool) -> impl Iterator<Item = (usize, usize)> {
    let count = match (n, closed) {
        (0 | 1, _) => 0,
        (2, true) => 1,
        (n, true) => n,
        (n, false) => n - 1,
    };
    (0..count).map(move |i| (i, (i + 1) % n))
}

/// Intersection of the segments `p0p1` and `q0q1` as parameters `(s, u)` with
/// `p0 + s (p1 - p0) = q0 + u (q1 - q0)`. Parallel segments never intersect.
pub fn segment_intersection(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let d = q1 - q0;
    let den = cross(&r, &d);
    let scale = r.norm() * d.norm();
    if den.abs() <= 1e-14 * scale || scale == 0.0 {
        return None;
    }
    let w = q0 - p0;
    let s = cross(&w, &d) / den;
    let u = cross(&w, &r) / den;
    ((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u)).then_some((s, u))
}

pub fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * s)).norm()
}

/// Distance from `p` to the nearest segment of a polyline.
pub fn point_polyline_distance(p: &Point, pts: &[Point], closed: bool) -> f64 {
    if pts.len() == 1 {
        return (p - pts[0]).norm();
    }
    segments(pts.len(), closed)
        .map(|(i, j)| point_segment_distance(p, &pts[i], &pts[j]))
        .fold(f64::INFINITY, f64::min)
}

/// Insert points so that no segment is longer than `max_len`.
pub fn densify(pts: &[Point], closed: bool, max_len: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(pts.len());
    if pts.len() < 2 {
        return pts.to_vec();
    }
    for (i, j) in segments(pts.len(), closed) {
        let (a, b) = (pts[i], pts[j]);
        let k = ((b - a).norm() / max_len).ceil().max(1.0) as usize;
        for m in 0..k {
            out.push(a + (b - a) * (m as f64 / k as f64));
        }
    }
    if !closed {
        out.push(pts[pts.len() - 1]);
    }
    out
}

/// A polyline to compare, with its closure flag.
#[derive(Debug, Clone, Copy)]
pub struct Curve<'a> {
    pub points: &'a [Point],
    pub closed: bool,
}

impl<'a> Curve<'a> {
    pub fn open(points: &'a [Point]) -> Self {
        Self { points, closed: false }
    }

    pub fn closed(points: &'a [Point]) -> Self {
        Self { points, closed: true }
    }
}

/// One-sided distance `sup_{p ∈ a} dist(p, b)`, where `a` is sampled at
/// resolution `step` and `b` may be a union of curves.
pub fn directed_hausdorff(a: &[Curve], b: &[Curve], step: f64) -> f64 {
    a.iter()
        .flat_map(|c| densify(c.points, c.closed, step))
        .map(|p| {
            b.iter()
                .map(|c| point_polyline_distance(&p, c.points, c.closed))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two unions of polylines.
pub fn hausdorff(a: &[Curve], b: &[Curve], step: f64) -> f64 {
    directed_hausdorff(a, b, step).max(directed_hausdorff(b, a, step))
}

/// Winding number of a closed ring around `p`.
pub fn winding_number(p: &Point, ring: &[Point]) -> i32 {
    let n = ring.len();
    let mut w = 0;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let side = cross(&(b - a), &(p - a));
        if a.y <= p.y {
            if b.y > p.y && side > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && side < 0.0 {
            w -= 1;
        }
    }
    w
}

pub fn point_in_polygon(p: &Point, ring: &[Point]) -> bool {
    winding_number(p, ring) != 0
}

/// First pair of non-adjacent intersecting segments, as
/// `(i, s, j, u)` with segment `i` before segment `j`.
pub fn first_self_intersection(pts: &[Point], closed: bool) -> Option<(usize, f64, usize, f64)> {
    let n = pts.len();
    let segs: Vec<(usize, usize)> = segments(n, closed).collect();
    let m = segs.len();
    for a in 0..m {
        let (i0, i1) = segs[a];
        let (lo, hi) = bbox(&pts[i0], &pts[i1]);
        for b in a + 2..m {
            if closed && a == 0 && b == m - 1 {
                continue;
            }
            let (j0, j1) = segs[b];
            let (lo2, hi2) = bbox(&pts[j0], &pts[j1]);
            if hi.x < lo2.x || hi2.x < lo.x || hi.y < lo2.y || hi2.y < lo.y {
                continue;
            }
            if let Some((s, u)) = segment_intersection(&pts[i0], &pts[i1], &pts[j0], &pts[j1]) {
                return Some((a, s, b, u));
            }
        }
    }
    None
}

pub fn is_simple(pts: &[Point], closed: bool) -> bool {
    first_self_intersection(pts, closed).is_none()
}

fn bbox(a: &Point, b: &Point) -> (Point, Point) {
    (a.inf(b), a.sup(b))
}
