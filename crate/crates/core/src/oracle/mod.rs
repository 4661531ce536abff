//! Brute-force first-arrival times on a grid.
//!
//! Dijkstra's algorithm over grid nodes joined by a stencil of primitive
//! lattice vectors. An edge `d` costs `τ = F(d)` at its midpoint, which is
//! the time needed to cross it at full wave speed; edges outside the cone
//! of admissible directions are dropped.

mod contour;
mod io;

pub use contour::{contour_to_front, iso_contours, ContourLine};
pub use io::{read_arrival_grid, write_arrival_grid};

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::finsler::{finsler_eval, SpacetimePoint, ZermeloData};
use crate::front::{Front, InitialFront, SourceMode};
use crate::geometry::{densify, hausdorff, point_in_polygon, point_polyline_distance, Curve, Point};
use crate::medium::{Domain, Medium};

/// Default stencil radius: all primitive `(i, j)` with `max(|i|, |j|) ≤ 2`,
/// sixteen neighbours.
pub const DEFAULT_STENCIL_RADIUS: usize = 2;

/// Regular node lattice `origin + spacing * (i, j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: Point,
    pub spacing: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(origin: Point, spacing: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(spacing > 0.0) || nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument("grid needs positive spacing and at least 2x2 nodes".into()));
        }
        Ok(Self { origin, spacing, nx, ny })
    }

    /// Largest lattice with the given spacing inside the domain box.
    pub fn covering(domain: &Domain<2>, spacing: f64) -> Result<Self> {
        let ext = domain.hi - domain.lo;
        let nx = (ext.x / spacing + 1e-9).floor() as usize + 1;
        let ny = (ext.y / spacing + 1e-9).floor() as usize + 1;
        Self::new(domain.lo, spacing, nx, ny)
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        self.origin + Point::new(i as f64, j as f64) * self.spacing
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub stencil_radius: usize,
    /// Re-evaluate each edge cost at the middle of its traversal time.
    pub refine_time: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { stencil_radius: DEFAULT_STENCIL_RADIUS, refine_time: true }
    }
}

/// First-arrival times on a grid; `f64::INFINITY` marks unreached nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalGrid {
    pub spec: GridSpec,
    /// Row-major, `arrival[j * nx + i]`.
    pub arrival: Vec<f64>,
    pub t_max: f64,
    pub warnings: Vec<String>,
}

impl ArrivalGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.arrival[j * self.spec.nx + i]
    }

    /// Bilinear interpolation; infinite if any surrounding node is unreached,
    /// `None` outside the grid.
    pub fn value_at(&self, x: &Point) -> Option<f64> {
        let s = &self.spec;
        let fx = (x.x - s.origin.x) / s.spacing;
        let fy = (x.y - s.origin.y) / s.spacing;
        if fx < 0.0 || fy < 0.0 || fx > (s.nx - 1) as f64 || fy > (s.ny - 1) as f64 {
            return None;
        }
        let i = (fx.floor() as usize).min(s.nx - 2);
        let j = (fy.floor() as usize).min(s.ny - 2);
        let (u, v) = (fx - i as f64, fy - j as f64);
        let c = [self.get(i, j), self.get(i + 1, j), self.get(i, j + 1), self.get(i + 1, j + 1)];
        if c.iter().any(|t| !t.is_finite()) {
            return Some(f64::INFINITY);
        }
        Some((c[0] * (1.0 - u) + c[1] * u) * (1.0 - v) + (c[2] * (1.0 - u) + c[3] * u) * v)
    }

    /// Area of `{arrival ≤ t}` with arrival interpolated linearly on the two
    /// triangles of each cell.
    pub fn area_below(&self, t: f64) -> f64 {
        let s = &self.spec;
        let big = 1e30;
        let f = |i: usize, j: usize| {
            let a = self.get(i, j);
            if a.is_finite() {
                a - t
            } else {
                big
            }
        };
        let mut area = 0.0;
        for j in 0..s.ny - 1 {
            for i in 0..s.nx - 1 {
                let p = [s.node(i, j), s.node(i + 1, j), s.node(i + 1, j + 1), s.node(i, j + 1)];
                let v = [f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)];
                area += sublevel_area(&[p[0], p[1], p[2]], &[v[0], v[1], v[2]]);
                area += sublevel_area(&[p[0], p[2], p[3]], &[v[0], v[2], v[3]]);
            }
        }
        area
    }
}

/// Area of the part of a triangle where the linear interpolant of `v` is
/// non-positive.
fn sublevel_area(p: &[Point; 3], v: &[f64; 3]) -> f64 {
    let mut poly = Vec::with_capacity(4);
    for k in 0..3 {
        let (a, b) = (k, (k + 1) % 3);
        if v[a] <= 0.0 {
            poly.push(p[a]);
        }
        if (v[a] <= 0.0) != (v[b] <= 0.0) {
            let w = v[a] / (v[a] - v[b]);
            poly.push(p[a] + (p[b] - p[a]) * w);
        }
    }
    crate::geometry::signed_area(&poly).abs()
}

#[derive(Clone, Copy, PartialEq)]
struct Queued {
    t: f64,
    node: usize,
}

impl Eq for Queued {}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on time, ties broken by node index for determinism.
        other.t.total_cmp(&self.t).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Primitive lattice vectors `(i, j)` with `max(|i|, |j|) ≤ r`.
pub fn stencil(r: usize) -> Vec<(i64, i64)> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let r = r as i64;
    let mut out = Vec::new();
    for j in -r..=r {
        for i in -r..=r {
            if (i, j) != (0, 0) && gcd(i, j) == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

fn edge_time(z: &ZermeloData<2>, d: &Point) -> Option<f64> {
    let e = finsler_eval(z, d).ok()?;
    if e.in_domain {
        e.f
    } else {
        None
    }
}

/// First-arrival times from `S₀` up to `t_max`.
pub fn first_arrival<M: Medium<2> + ?Sized>(
    m: &M,
    f0: &InitialFront,
    spec: &GridSpec,
    t_max: f64,
    opts: &OracleOptions,
) -> Result<ArrivalGrid> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument("t_max must be positive".into()));
    }
    let (nx, ny, h) = (spec.nx, spec.ny, spec.spacing);
    let mut arrival = vec![f64::INFINITY; nx * ny];
    let mut heap = BinaryHeap::new();
    let domain = *m.domain();
    let homogeneous = m.is_homogeneous();
    let mut warnings = Vec::new();

    // Seeds: B₀ at zero (wildfire), and exact travel times from sampled
    // points of S₀ to the nodes of a band around it.
    let ring = f0.ring();
    let samples = densify(ring, true, h / 4.0);
    let band = (opts.stencil_radius as f64 + 1.5) * h;
    let (lo, hi) = samples.iter().fold((samples[0], samples[0]), |(lo, hi), p| (lo.inf(p), hi.sup(p)));
    let index = |x: f64, o: f64| ((x - o) / h).floor();
    let i0 = index(lo.x - band, spec.origin.x).max(0.0) as usize;
    let j0 = index(lo.y - band, spec.origin.y).max(0.0) as usize;
    let i1 = (index(hi.x + band, spec.origin.x) + 1.0).clamp(0.0, (nx - 1) as f64) as usize;
    let j1 = (index(hi.y + band, spec.origin.y) + 1.0).clamp(0.0, (ny - 1) as f64) as usize;
    for j in j0..=j1 {
        for i in i0..=i1 {
            let x = spec.node(i, j);
            let inside = point_in_polygon(&x, ring);
            let mut best = if inside && f0.mode() == SourceMode::OutwardOnly { 0.0 } else { f64::INFINITY };
            if best > 0.0 && point_polyline_distance(&x, ring, true) <= band {
                for q in &samples {
                    let d = x - q;
                    if d.norm() == 0.0 {
                        best = 0.0;
                        break;
                    }
                    let mid = q + d * 0.5;
                    if !domain.contains(&mid) {
                        continue;
                    }
                    let z = m.zermelo(&SpacetimePoint::new(0.0, mid))?;
                    if let Some(tau) = edge_time(&z, &d) {
                        best = best.min(tau);
                    }
                }
            }
            if best.is_finite() {
                arrival[j * nx + i] = best;
                heap.push(Queued { t: best, node: j * nx + i });
            }
        }
    }

    let offsets = stencil(opts.stencil_radius);
    let mut settled = vec![false; nx * ny];
    let mut last = 0.0f64;
    let mut min_scale = f64::INFINITY;
    while let Some(Queued { t, node }) = heap.pop() {
        if settled[node] || t > arrival[node] {
            continue;
        }
        if t > t_max {
            break;
        }
        debug_assert!(t >= last, "arrival times must be extracted in order");
        last = t;
        settled[node] = true;
        let (i, j) = ((node % nx) as i64, (node / nx) as i64);
        let x = spec.node(i as usize, j as usize);
        let mut z_here: Option<ZermeloData<2>> = None;
        for &(di, dj) in &offsets {
            let (ni, nj) = (i + di, j + dj);
            if ni < 0 || nj < 0 || ni >= nx as i64 || nj >= ny as i64 {
                continue;
            }
            let nb = nj as usize * nx + ni as usize;
            if settled[nb] {
                continue;
            }
            let d = Point::new(di as f64, dj as f64) * h;
            let mid = x + d * 0.5;
            let z = if homogeneous {
                *z_here.get_or_insert(m.zermelo(&SpacetimePoint::new(t, x))?)
            } else {
                m.zermelo(&SpacetimePoint::new(t, mid))?
            };
            let Some(mut tau) = edge_time(&z, &d) else { continue };
            if opts.refine_time && !homogeneous {
                let z = m.zermelo(&SpacetimePoint::new((t + 0.5 * tau).min(domain.t_end), mid))?;
                match edge_time(&z, &d) {
                    Some(r) => tau = r,
                    None => continue,
                }
            }
            let cand = t + tau;
            if cand < arrival[nb] {
                arrival[nb] = cand;
                heap.push(Queued { t: cand, node: nb });
            }
        }
        if z_here.is_none() && node % 97 == 0 {
            let z = m.zermelo(&SpacetimePoint::new(t, x))?;
            min_scale = min_scale.min(1.0 / z.h().symmetric_eigenvalues().max().sqrt());
        }
    }
    for (a, s) in arrival.iter_mut().zip(&settled) {
        if !*s {
            *a = f64::INFINITY;
        }
    }
    if min_scale.is_finite() && 10.0 * h > min_scale * t_max {
        warnings.push(format!(
            "GridTooCoarse: spacing {h} resolves fewer than ten cells of the smallest indicatrix radius over t_max"
        ));
    }
    Ok(ArrivalGrid { spec: *spec, arrival, t_max, warnings })
}

/// Distances between a front and the oracle level set at the front's time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontComparison {
    pub hausdorff: f64,
    /// Offset of largest magnitude from a front point to the level set,
    /// positive where the front lies beyond it.
    pub signed_max: f64,
}

pub fn compare_front(front: &Front, grid: &ArrivalGrid) -> Result<FrontComparison> {
    if grid.t_max < front.t {
        return Err(Error::InvalidArgument("arrival grid stops before the front time".into()));
    }
    let lines = iso_contours(grid, front.t);
    if lines.is_empty() {
        return Err(Error::EmptyContour(front.t));
    }
    let chains = front.chain_positions();
    let a: Vec<Curve> = chains.iter().map(|(p, c)| Curve { points: p, closed: *c }).collect();
    let b: Vec<Curve> = lines.iter().map(|l| Curve { points: &l.points, closed: l.closed }).collect();
    let step = grid.spec.spacing / 4.0;
    let hd = hausdorff(&a, &b, step);
    let mut signed = 0.0f64;
    for c in &a {
        for p in densify(c.points, c.closed, step) {
            let dist = b.iter().map(|l| point_polyline_distance(&p, l.points, l.closed)).fold(f64::INFINITY, f64::min);
            let beyond = grid.value_at(&p).is_none_or(|v| v > front.t);
            let s = if beyond { dist } else { -dist };
            if s.abs() > signed.abs() {
                signed = s;
            }
        }
    }
    Ok(FrontComparison { hausdorff: hd, signed_max: signed })
}
