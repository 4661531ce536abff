//! Lagrangian wavefronts in the plane.
//!
//! A front is a set of marker chains. Every chain is stored so that the wave
//! advances to the *right* of its parameter direction: counter-clockwise
//! rings expand outwards, clockwise rings are reversed on seeding, and the
//! inward ring of a two-sided source is the reversed outer ring.

mod io;
mod richards;
mod untangle;

pub use io::{read_front_csv, write_front_csv, write_fronts_geojson, FrontRecord, RecordRow};
pub use richards::{front_is_mild, propagate_front_richards, richards_step, richards_velocity};
pub use untangle::untangle_front;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::christoffel::Route;
use crate::error::{Error, Result};
use crate::finsler::{classify_wind, orthogonality_residual, unit_normal, SpacetimePoint, WindKind};
use crate::geodesic::{advance, GeodesicState, DEFAULT_DT};
use crate::geometry::{is_simple, segments, signed_area, Point};
use crate::medium::Medium;

/// Spacing ratio above which a chain is redistributed by arclength.
pub const RESAMPLE_RATIO: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceMode {
    /// Wildfire: only the outward side of the ring burns.
    OutwardOnly,
    /// Generic wave source radiating to both sides.
    BothSides,
}

/// Closed ignition ring `S₀ = ∂B₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialFront {
    ring: Vec<Point>,
    orientation: Orientation,
    mode: SourceMode,
}

impl InitialFront {
    pub fn new(ring: Vec<Point>, orientation: Orientation, mode: SourceMode) -> Result<Self> {
        let n = ring.len();
        if n < 8 {
            return Err(Error::InvalidArgument(format!("initial front needs at least 8 vertices, got {n}")));
        }
        if ring.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidArgument("initial front has non-finite vertices".into()));
        }
        let gaps: Vec<f64> = (0..n).map(|i| (ring[(i + 1) % n] - ring[i]).norm()).collect();
        let mean = gaps.iter().sum::<f64>() / n as f64;
        if gaps.iter().any(|g| *g < 0.2 * mean || *g > 5.0 * mean) {
            return Err(Error::InvalidArgument("initial front spacing is too uneven; resample it".into()));
        }
        if !is_simple(&ring, true) {
            return Err(Error::InvalidArgument("initial front is self-intersecting".into()));
        }
        let area = signed_area(&ring);
        let expected = match orientation {
            Orientation::Ccw => area > 0.0,
            Orientation::Cw => area < 0.0,
        };
        if !expected {
            return Err(Error::InvalidArgument("initial front orientation does not match its vertex order".into()));
        }
        Ok(Self { ring, orientation, mode })
    }

    /// Counter-clockwise circle.
    pub fn circle(center: Point, radius: f64, n: usize, mode: SourceMode) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument("circle radius must be positive".into()));
        }
        let ring = (0..n)
            .map(|k| {
                let phi = std::f64::consts::TAU * k as f64 / n as f64;
                center + radius * Point::new(phi.cos(), phi.sin())
            })
            .collect();
        Self::new(ring, Orientation::Ccw, mode)
    }

    /// Counter-clockwise polar curve `r(φ)` about `center`, resampled to
    /// uniform arclength.
    pub fn polar(center: Point, n: usize, mode: SourceMode, r: impl Fn(f64) -> f64) -> Result<Self> {
        let fine = (16 * n).max(1024);
        let dense: Vec<Point> = (0..fine)
            .map(|k| {
                let phi = std::f64::consts::TAU * k as f64 / fine as f64;
                center + r(phi) * Point::new(phi.cos(), phi.sin())
            })
            .collect();
        Self::new(resample_polyline(&dense, true, n), Orientation::Ccw, mode)
    }

    /// Polygon through `vertices` (either orientation), resampled to `n`
    /// points of uniform arclength.
    pub fn polygon(vertices: &[Point], n: usize, mode: SourceMode) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidArgument("polygon needs at least 3 vertices".into()));
        }
        let orientation = if signed_area(vertices) >= 0.0 { Orientation::Ccw } else { Orientation::Cw };
        Self::new(resample_polyline(vertices, true, n), orientation, mode)
    }

    pub fn ring(&self) -> &[Point] {
        &self.ring
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn mode(&self) -> SourceMode {
        self.mode
    }

    /// Area of `B₀`.
    pub fn area(&self) -> f64 {
        signed_area(&self.ring).abs()
    }

    /// The ring ordered counter-clockwise, with the original parameter of
    /// each vertex.
    fn ccw_ring(&self) -> Vec<(Point, f64)> {
        let n = self.ring.len();
        let mut out: Vec<(Point, f64)> = self.ring.iter().enumerate().map(|(k, p)| (*p, k as f64 / n as f64)).collect();
        if self.orientation == Orientation::Cw {
            out.reverse();
        }
        out
    }
}

/// Points at uniform arclength along a polyline (endpoints kept for open
/// polylines).
pub fn resample_polyline(pts: &[Point], closed: bool, n: usize) -> Vec<Point> {
    let cum = cumulative_length(pts, closed);
    let total = *cum.last().unwrap();
    let count = if closed { n } else { n.saturating_sub(1).max(1) };
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    let segs: Vec<(usize, usize)> = segments(pts.len(), closed).collect();
    for k in 0..n {
        let target = total * k as f64 / count as f64;
        while seg + 1 < segs.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let (i, j) = segs[seg];
        let len = cum[seg + 1] - cum[seg];
        let s = if len > 0.0 { ((target - cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        out.push(pts[i] + (pts[j] - pts[i]) * s);
    }
    out
}

fn cumulative_length(pts: &[Point], closed: bool) -> Vec<f64> {
    let mut cum = vec![0.0];
    for (i, j) in segments(pts.len(), closed) {
        cum.push(cum.last().unwrap() + (pts[j] - pts[i]).norm());
    }
    cum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MarkerStatus {
    Active,
    Extinct,
    Cut,
    LeftDomain,
}

impl fmt::Display for MarkerStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkerStatus::Active => "Active",
            MarkerStatus::Extinct => "Extinct",
            MarkerStatus::Cut => "Cut",
            MarkerStatus::LeftDomain => "LeftDomain",
        })
    }
}

impl FromStr for MarkerStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Active" => Ok(MarkerStatus::Active),
            "Extinct" => Ok(MarkerStatus::Extinct),
            "Cut" => Ok(MarkerStatus::Cut),
            "LeftDomain" => Ok(MarkerStatus::LeftDomain),
            other => Err(Error::InvalidArgument(format!("unknown marker status `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontMarker {
    pub s_index: usize,
    pub x: Point,
    pub xdot: Point,
    pub status: MarkerStatus,
    /// Parameter in `[0, 1)` of the point of `S₀` this marker descends from.
    pub lineage: f64,
}

/// Ordered run of markers, closed (a ring) or open (after a split).
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub markers: Vec<FrontMarker>,
    pub closed: bool,
}

impl Chain {
    pub fn positions(&self) -> Vec<Point> {
        self.markers.iter().map(|m| m.x).collect()
    }

    /// `∂_s f` by centred differences, one-sided second order at open ends.
    pub fn tangents(&self) -> Vec<Point> {
        tangents(&self.positions(), self.closed)
    }

    pub fn spacing_ratio(&self) -> f64 {
        let pts = self.positions();
        let gaps: Vec<f64> = segments(pts.len(), self.closed).map(|(i, j)| (pts[j] - pts[i]).norm()).collect();
        let max = gaps.iter().copied().fold(0.0, f64::max);
        let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
        if gaps.is_empty() {
            1.0
        } else {
            max / min
        }
    }
}

pub(crate) fn tangents(pts: &[Point], closed: bool) -> Vec<Point> {
    let n = pts.len();
    match n {
        0 => vec![],
        1 => vec![Point::zeros()],
        2 => vec![pts[1] - pts[0]; 2],
        _ => (0..n)
            .map(|i| {
                if closed {
                    0.5 * (pts[(i + 1) % n] - pts[(i + n - 1) % n])
                } else if i == 0 {
                    0.5 * (-3.0 * pts[0] + 4.0 * pts[1] - pts[2])
                } else if i == n - 1 {
                    0.5 * (3.0 * pts[n - 1] - 4.0 * pts[n - 2] + pts[n - 3])
                } else {
                    0.5 * (pts[i + 1] - pts[i - 1])
                }
            })
            .collect(),
    }
}

/// Right-hand normal of a tangent: the advancing side of a chain.
pub fn advancing_side(tangent: &Point) -> Point {
    Point::new(tangent.y, -tangent.x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtinctionPoint {
    pub t: f64,
    pub x: Point,
    /// Interpolated `S₀` parameter.
    pub lineage: f64,
}

/// Running counters of a propagation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FrontDiagnostics {
    pub loops_removed: usize,
    pub resamples: usize,
    /// Changes in the number of active chains after the initial split.
    pub topology_changes: usize,
    /// Largest `|F(ẋ) - 1|` seen after a step.
    pub max_drift: f64,
    /// Markers stopped by a numerical error other than the cone or domain guards.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub t: f64,
    pub chains: Vec<Chain>,
    /// Markers that stopped, with their last state.
    pub retired: Vec<FrontMarker>,
    pub extinction: Vec<ExtinctionPoint>,
    pub orientation: Orientation,
    pub mode: SourceMode,
    pub diagnostics: FrontDiagnostics,
    next_index: usize,
}

impl Front {
    pub fn active_markers(&self) -> impl Iterator<Item = &FrontMarker> {
        self.chains.iter().flat_map(|c| c.markers.iter())
    }

    pub fn active_count(&self) -> usize {
        self.chains.iter().map(|c| c.markers.len()).sum()
    }

    pub fn all_markers(&self) -> impl Iterator<Item = &FrontMarker> {
        self.active_markers().chain(self.retired.iter())
    }

    pub fn chain_positions(&self) -> Vec<(Vec<Point>, bool)> {
        self.chains.iter().map(|c| (c.positions(), c.closed)).collect()
    }

    fn fresh_index(&mut self) -> usize {
        self.next_index += 1;
        self.next_index - 1
    }

    /// Largest `|g_{ẋ}(ẋ, ∂_s f)| / |∂_s f|` over active markers, with `∂_s f`
    /// estimated along the chains. Endpoints of open chains only have a
    /// one-sided tangent and are skipped.
    pub fn orthogonality_defect<M: Medium<2> + ?Sized>(&self, m: &M) -> Result<f64> {
        let mut worst = 0.0f64;
        for c in &self.chains {
            let n = c.markers.len();
            if n < 3 {
                continue;
            }
            for (k, (mk, tau)) in c.markers.iter().zip(c.tangents()).enumerate() {
                if !c.closed && (k == 0 || k + 1 == n) {
                    continue;
                }
                let z = m.zermelo(&SpacetimePoint::new(self.t, mk.x))?;
                let r = orthogonality_residual(&z, &mk.xdot, &(tau / tau.norm()))?;
                worst = worst.max(r.abs());
            }
        }
        Ok(worst)
    }
}

fn velocity_at<M: Medium<2> + ?Sized>(m: &M, t: f64, x: &Point, tangent: &Point) -> Result<Point> {
    let z = m.zermelo(&SpacetimePoint::new(t, *x))?;
    Ok(unit_normal(&z, tangent, &advancing_side(tangent))?.u)
}

/// Markers on `S₀` with the outward `F`-unit normal velocities, followed by
/// extinction detection.
pub fn seed_front<M: Medium<2> + ?Sized>(m: &M, f0: &InitialFront) -> Result<Front> {
    let ring = f0.ccw_ring();
    let mut rings = vec![ring.clone()];
    if f0.mode == SourceMode::BothSides {
        rings.push(ring.into_iter().rev().collect());
    }
    let mut next = 0;
    let mut chains = Vec::new();
    for r in rings {
        let pts: Vec<Point> = r.iter().map(|(p, _)| *p).collect();
        let mut markers = Vec::with_capacity(pts.len());
        for ((p, s), tau) in r.iter().zip(tangents(&pts, true)) {
            markers.push(FrontMarker {
                s_index: next,
                x: *p,
                xdot: velocity_at(m, 0.0, p, &tau)?,
                status: MarkerStatus::Active,
                lineage: *s,
            });
            next += 1;
        }
        chains.push(Chain { markers, closed: true });
    }
    let front = Front {
        t: 0.0,
        chains,
        retired: Vec::new(),
        extinction: Vec::new(),
        orientation: f0.orientation,
        mode: f0.mode,
        diagnostics: FrontDiagnostics::default(),
        next_index: next,
    };
    detect_extinction(m, &front)
}

/// Mark markers whose velocity has crossed to the far side of the tangent
/// (`ẋ × ∂_s f ≤ 0`) in strong-wind regions as extinct, record the
/// interpolated extinction points and split the chains into active runs.
pub fn detect_extinction<M: Medium<2> + ?Sized>(m: &M, front: &Front) -> Result<Front> {
    let mut out = front.clone();
    out.chains.clear();
    out.extinction.clear();
    for chain in &front.chains {
        let n = chain.markers.len();
        if n < 3 {
            out.chains.push(chain.clone());
            continue;
        }
        let taus = chain.tangents();
        let mut side = Vec::with_capacity(n);
        let mut strong = Vec::with_capacity(n);
        for (mk, tau) in chain.markers.iter().zip(&taus) {
            let z = m.zermelo(&SpacetimePoint::new(front.t, mk.x))?;
            strong.push(classify_wind(&z).kind != WindKind::Mild);
            side.push(crate::geometry::cross(&mk.xdot, tau) / tau.norm());
        }
        let extinct: Vec<bool> = (0..n).map(|i| strong[i] && side[i] <= 0.0).collect();
        for (i, j) in segments(n, chain.closed) {
            if (strong[i] || strong[j]) && (side[i] > 0.0) != (side[j] > 0.0) {
                let w = side[i] / (side[i] - side[j]);
                let (a, b) = (&chain.markers[i], &chain.markers[j]);
                out.extinction.push(ExtinctionPoint {
                    t: front.t,
                    x: a.x + (b.x - a.x) * w,
                    lineage: lerp_lineage(a.lineage, b.lineage, w),
                });
            }
        }
        let flags: Vec<MarkerStatus> =
            extinct.iter().map(|e| if *e { MarkerStatus::Extinct } else { MarkerStatus::Active }).collect();
        let (runs, retired) = split_chain(chain, &flags);
        out.chains.extend(runs);
        out.retired.extend(retired);
    }
    if front.t > 0.0 && out.chains.len() != front.chains.len() {
        out.diagnostics.topology_changes += 1;
    }
    Ok(out)
}

/// Interpolate on the circle `[0, 1)` along the short way.
pub(crate) fn lerp_lineage(a: f64, b: f64, w: f64) -> f64 {
    let mut d = b - a;
    if d > 0.5 {
        d -= 1.0;
    } else if d < -0.5 {
        d += 1.0;
    }
    (a + w * d).rem_euclid(1.0)
}

/// Split a chain into maximal runs of markers whose status is `Active`;
/// the others are returned with their new status.
pub(crate) fn split_chain(chain: &Chain, status: &[MarkerStatus]) -> (Vec<Chain>, Vec<FrontMarker>) {
    let n = chain.markers.len();
    let retired: Vec<FrontMarker> = chain
        .markers
        .iter()
        .zip(status)
        .filter(|(_, s)| **s != MarkerStatus::Active)
        .map(|(m, s)| FrontMarker { status: *s, ..*m })
        .collect();
    if retired.is_empty() {
        return (vec![chain.clone()], retired);
    }
    let start = if chain.closed {
        // Begin right after an inactive marker so runs do not wrap.
        (0..n).find(|&i| status[i] != MarkerStatus::Active).map(|i| (i + 1) % n).unwrap_or(0)
    } else {
        0
    };
    let mut runs = Vec::new();
    let mut cur: Vec<FrontMarker> = Vec::new();
    for k in 0..n {
        let i = (start + k) % n;
        if status[i] == MarkerStatus::Active {
            cur.push(chain.markers[i]);
        } else if !cur.is_empty() {
            runs.push(Chain { markers: std::mem::take(&mut cur), closed: false });
        }
    }
    if !cur.is_empty() {
        runs.push(Chain { markers: cur, closed: false });
    }
    (runs, retired)
}

/// Redistribute the markers of a chain uniformly by arclength when the
/// spacing ratio exceeds `ratio`, or when a segment exceeds `max_spacing`
/// (which also raises the marker count). New velocities are re-projected
/// onto the `F`-unit normal of the interpolated front.
pub fn resample_chain<M: Medium<2> + ?Sized>(
    m: &M,
    front: &mut Front,
    chain_index: usize,
    ratio: f64,
    max_spacing: Option<f64>,
) -> Result<bool> {
    let chain = &front.chains[chain_index];
    let n = chain.markers.len();
    if n < 4 {
        return Ok(false);
    }
    let pts = chain.positions();
    let cum = cumulative_length(&pts, chain.closed);
    let total = *cum.last().unwrap();
    let longest = segments(n, chain.closed).map(|(i, j)| (pts[j] - pts[i]).norm()).fold(0.0, f64::max);
    let too_long = max_spacing.is_some_and(|h| longest > h);
    if chain.spacing_ratio() <= ratio && !too_long {
        return Ok(false);
    }
    let count = match max_spacing {
        Some(h) => {
            let needed = (total / h).ceil() as usize + usize::from(!chain.closed);
            n.max(needed)
        }
        None => n,
    };
    let closed = chain.closed;
    let segs: Vec<(usize, usize)> = segments(n, closed).collect();
    let intervals = if closed { count } else { count - 1 };
    let at = |i: isize| -> Point {
        if closed {
            pts[i.rem_euclid(n as isize) as usize]
        } else {
            pts[i.clamp(0, n as isize - 1) as usize]
        }
    };
    let old = chain.markers.clone();
    let mut new_pts = Vec::with_capacity(count);
    let mut lineage = Vec::with_capacity(count);
    let mut seg = 0;
    for k in 0..count {
        let target = total * k as f64 / intervals as f64;
        while seg + 1 < segs.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let (i, j) = segs[seg];
        let len = cum[seg + 1] - cum[seg];
        let u = if len > 0.0 { ((target - cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        let i = i as isize;
        new_pts.push(catmull_rom(&at(i - 1), &at(i), &at(i + 1), &at(i + 2), u));
        lineage.push(lerp_lineage(old[i as usize].lineage, old[j].lineage, u));
    }
    let taus = tangents(&new_pts, closed);
    let t = front.t;
    let velocities: Vec<Point> =
        new_pts.iter().zip(&taus).map(|(p, tau)| velocity_at(m, t, p, tau)).collect::<Result<_>>()?;
    let mut markers = Vec::with_capacity(count);
    for k in 0..count {
        markers.push(FrontMarker {
            s_index: front.fresh_index(),
            x: new_pts[k],
            xdot: velocities[k],
            status: MarkerStatus::Active,
            lineage: lineage[k],
        });
    }
    front.chains[chain_index].markers = markers;
    front.diagnostics.resamples += 1;
    Ok(true)
}

fn catmull_rom(p0: &Point, p1: &Point, p2: &Point, p3: &Point, u: f64) -> Point {
    let u2 = u * u;
    let u3 = u2 * u;
    0.5 * ((2.0 * p1) + (p2 - p0) * u + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u2 + (3.0 * p1 - p0 - 3.0 * p2 + p3) * u3)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationOptions {
    pub dt: f64,
    pub route: Route,
    pub renormalize: bool,
    /// Times at which fronts are synchronised and returned. Empty means
    /// only `t_end`.
    pub output_times: Vec<f64>,
    pub resample_ratio: f64,
    pub max_spacing: Option<f64>,
    pub untangle: bool,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            route: Route::LorentzRanders,
            renormalize: true,
            output_times: Vec::new(),
            resample_ratio: RESAMPLE_RATIO,
            max_spacing: None,
            untangle: true,
        }
    }
}

impl PropagationOptions {
    pub(crate) fn schedule(&self, t0: f64, t_end: f64) -> Result<Vec<f64>> {
        if !(self.dt > 0.0) {
            return Err(Error::InvalidArgument("dt must be positive".into()));
        }
        let mut times: Vec<f64> = if self.output_times.is_empty() {
            vec![t_end]
        } else {
            self.output_times.iter().copied().filter(|t| *t > t0 && *t <= t_end + 1e-12).collect()
        };
        times.sort_by(f64::total_cmp);
        times.dedup();
        if times.is_empty() {
            return Err(Error::InvalidArgument("no output time lies after the initial front".into()));
        }
        Ok(times)
    }
}

/// Advance every active marker along its cone geodesic and synchronise the
/// front (untangling, extinction, resampling) at each output time.
pub fn propagate_front_ode<M: Medium<2> + ?Sized>(
    m: &M,
    front0: &Front,
    t_end: f64,
    opts: &PropagationOptions,
) -> Result<Vec<Front>> {
    let times = opts.schedule(front0.t, t_end)?;
    let mut front = front0.clone();
    let mut out = Vec::with_capacity(times.len());
    for &t_next in &times {
        let span = t_next - front.t;
        let steps = ((span / opts.dt) - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        let t0 = front.t;
        let mut max_drift = front.diagnostics.max_drift;
        let mut failures = 0;
        let mut chains = Vec::new();
        let mut retired = Vec::new();
        for chain in &front.chains {
            let moved: Vec<(FrontMarker, MarkerStatus, f64, bool)> = chain
                .markers
                .par_iter()
                .map(|mk| {
                    let mut s = GeodesicState::new(mk.x, mk.xdot);
                    let mut drift = 0.0f64;
                    for k in 0..steps {
                        match advance(m, t0 + k as f64 * h, &s, h, opts.route, opts.renormalize) {
                            Ok((next, d)) => {
                                s = next;
                                drift = drift.max(d);
                            }
                            Err(e) => {
                                let (status, failed) = match e {
                                    Error::DomainEdge { .. } => (MarkerStatus::LeftDomain, false),
                                    Error::ConeBoundary | Error::OutsideCone | Error::DegenerateDirection => {
                                        (MarkerStatus::Extinct, false)
                                    }
                                    _ => (MarkerStatus::Extinct, true),
                                };
                                return (FrontMarker { x: s.x, xdot: s.xdot, ..*mk }, status, drift, failed);
                            }
                        }
                    }
                    (FrontMarker { x: s.x, xdot: s.xdot, ..*mk }, MarkerStatus::Active, drift, false)
                })
                .collect();
            let mut next = chain.clone();
            let mut status = Vec::with_capacity(moved.len());
            for (k, (mk, st, d, failed)) in moved.into_iter().enumerate() {
                next.markers[k] = mk;
                status.push(st);
                max_drift = max_drift.max(d);
                failures += usize::from(failed);
            }
            let (runs, gone) = split_chain(&next, &status);
            chains.extend(runs);
            retired.extend(gone);
        }
        let before = front.chains.len();
        front.chains = chains;
        front.retired.extend(retired);
        front.t = t_next;
        front.diagnostics.max_drift = max_drift;
        front.diagnostics.failures += failures;
        synchronise(m, &mut front, opts)?;
        if front.chains.len() != before {
            front.diagnostics.topology_changes += 1;
        }
        out.push(front.clone());
    }
    Ok(out)
}

pub(crate) fn synchronise<M: Medium<2> + ?Sized>(m: &M, front: &mut Front, opts: &PropagationOptions) -> Result<()> {
    if opts.untangle {
        let first_new = front.next_index;
        *front = untangle_front(front);
        reproject_from(m, front, first_new)?;
    }
    let extinction_before = front.extinction.clone();
    let topo = front.diagnostics.topology_changes;
    *front = detect_extinction(m, front)?;
    // Keep the seeding record unless a new strong-wind crossing shows up.
    if front.extinction.is_empty() {
        front.extinction = extinction_before;
    }
    front.diagnostics.topology_changes = topo;
    for c in 0..front.chains.len() {
        resample_chain(m, front, c, opts.resample_ratio, opts.max_spacing)?;
    }
    Ok(())
}

/// Give markers created by untangling (index `≥ first_new`) the `F`-unit
/// normal velocity of the local front.
fn reproject_from<M: Medium<2> + ?Sized>(m: &M, front: &mut Front, first_new: usize) -> Result<()> {
    let t = front.t;
    for chain in &mut front.chains {
        if !chain.markers.iter().any(|mk| mk.s_index >= first_new) || chain.markers.len() < 2 {
            continue;
        }
        let taus = chain.tangents();
        for (mk, tau) in chain.markers.iter_mut().zip(taus) {
            if mk.s_index >= first_new {
                mk.xdot = velocity_at(m, t, &mk.x, &tau)?;
            }
        }
    }
    Ok(())
}

/// Area of `B₀` plus the quadrilateral cells swept between consecutive
/// fronts by neighbouring markers that stay active.
pub fn burned_area(fronts: &[Front], f0: &InitialFront) -> f64 {
    let mut area = f0.area();
    for pair in fronts.windows(2) {
        let later: std::collections::HashMap<usize, Point> =
            pair[1].active_markers().map(|mk| (mk.s_index, mk.x)).collect();
        for chain in &pair[0].chains {
            for (i, j) in segments(chain.markers.len(), chain.closed) {
                let (a, b) = (&chain.markers[i], &chain.markers[j]);
                if let (Some(a1), Some(b1)) = (later.get(&a.s_index), later.get(&b.s_index)) {
                    area += signed_area(&[a.x, b.x, *b1, *a1]).abs();
                }
            }
        }
    }
    area
}

impl Front {
    /// Front assembled from given chains, for tests and external sources.
    pub fn from_chains(t: f64, chains: Vec<Chain>, orientation: Orientation, mode: SourceMode) -> Self {
        let next_index = chains.iter().flat_map(|c| c.markers.iter()).map(|m| m.s_index + 1).max().unwrap_or(0);
        Self {
            t,
            chains,
            retired: Vec::new(),
            extinction: Vec::new(),
            orientation,
            mode,
            diagnostics: FrontDiagnostics::default(),
            next_index,
        }
    }
}
