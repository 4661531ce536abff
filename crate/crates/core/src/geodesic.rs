//! Time-parametrised cone geodesics.
//!
//! A lightlike pregeodesic `t ↦ (t, x(t))` of either spacetime metric solves
//!
//! ```text
//! ẍ^k = -Γ^k_ij ẋ^i ẋ^j + Γ^0_ij ẋ^i ẋ^j ẋ^k,   k = 1..n,  ẋ^0 = 1
//! ```
//!
//! with `Γ` the formal Christoffel symbols of `G = dt² - F²` (evaluated in the
//! direction `(1, ẋ)`) or the Christoffel symbols of the Lorentz metric of the
//! Zermelo data. The system is integrated with classical fixed-step RK4.

use rayon::prelude::*;

use crate::christoffel::{formal_christoffels, lorentz_christoffels, Route, SpacetimeVector, MAX_SPACETIME_DIM};
use crate::error::{Error, Result};
use crate::finsler::{finsler_eval, SpacetimePoint, Vector, CONE_MARGIN};
use crate::medium::Medium;

/// Default time step.
pub const DEFAULT_DT: f64 = 1e-3;

/// Tolerance on `|F(ẋ(0)) - 1|` for initial data.
pub const INITIAL_SPEED_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicState<const N: usize> {
    pub x: Vector<N>,
    pub xdot: Vector<N>,
}

impl<const N: usize> GeodesicState<N> {
    pub fn new(x: Vector<N>, xdot: Vector<N>) -> Self {
        Self { x, xdot }
    }
}

/// Acceleration together with the `k = 0` component of the same expression,
/// which vanishes for a time-parametrised curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsEval<const N: usize> {
    pub accel: Vector<N>,
    pub time_component: f64,
    /// Largest magnitude among the contracted terms, for normalising the
    /// `time_component` check.
    pub scale: f64,
}

pub fn geodesic_rhs<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    t: f64,
    s: &GeodesicState<N>,
    route: Route,
) -> Result<Vector<N>> {
    Ok(geodesic_rhs_full(m, t, s, route)?.accel)
}

pub fn geodesic_rhs_full<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    t: f64,
    s: &GeodesicState<N>,
    route: Route,
) -> Result<RhsEval<N>> {
    let p = SpacetimePoint::new(t, s.x);
    let gamma = match route {
        Route::FormalG => formal_christoffels(m, &p, &SpacetimeVector::new(1.0, s.xdot)).map_err(|e| match e {
            Error::OutsideCone | Error::DegenerateDirection => Error::ConeBoundary,
            other => other,
        })?,
        Route::LorentzRanders => lorentz_christoffels(m, &p)?,
    };
    let mut y = [0.0; MAX_SPACETIME_DIM];
    y[0] = 1.0;
    for i in 0..N {
        y[i + 1] = s.xdot[i];
    }
    let c = gamma.contract_twice(&y);
    let mut accel = Vector::<N>::zeros();
    for k in 0..N {
        accel[k] = -c[k + 1] + c[0] * y[k + 1];
    }
    let time_component = -c[0] + c[0] * y[0];
    let scale = c.iter().take(N + 1).fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(RhsEval { accel, time_component, scale })
}

fn check_cone<const N: usize, M: Medium<N> + ?Sized>(m: &M, t: f64, s: &GeodesicState<N>) -> Result<f64> {
    let z = m.zermelo(&SpacetimePoint::new(t, s.x))?;
    let e = finsler_eval(&z, &s.xdot)?;
    match e.f {
        Some(f) if e.in_domain && e.cone_margin() >= CONE_MARGIN => Ok(f),
        _ => Err(Error::ConeBoundary),
    }
}

/// `F(ẋ)` at the current point; fails with `ConeBoundary` when the velocity
/// is outside or within `CONE_MARGIN` of the admissible cone.
pub fn speed<const N: usize, M: Medium<N> + ?Sized>(m: &M, t: f64, s: &GeodesicState<N>) -> Result<f64> {
    check_cone(m, t, s)
}

/// One classical RK4 step of the first-order system `(x, ẋ)`.
pub fn rk4_step<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    t: f64,
    s: &GeodesicState<N>,
    dt: f64,
    route: Route,
) -> Result<GeodesicState<N>> {
    let half = 0.5 * dt;
    let k1v = geodesic_rhs(m, t, s, route)?;
    let k1x = s.xdot;
    let s2 = GeodesicState::new(s.x + k1x * half, s.xdot + k1v * half);
    let k2v = geodesic_rhs(m, t + half, &s2, route)?;
    let k2x = s2.xdot;
    let s3 = GeodesicState::new(s.x + k2x * half, s.xdot + k2v * half);
    let k3v = geodesic_rhs(m, t + half, &s3, route)?;
    let k3x = s3.xdot;
    let s4 = GeodesicState::new(s.x + k3x * dt, s.xdot + k3v * dt);
    let k4v = geodesic_rhs(m, t + dt, &s4, route)?;
    let k4x = s4.xdot;
    let sixth = dt / 6.0;
    Ok(GeodesicState::new(
        s.x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * sixth,
        s.xdot + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * sixth,
    ))
}

/// Advance one step, optionally projecting the velocity back onto the
/// indicatrix. Returns the new state and `|F(ẋ) - 1|` after the step.
pub fn advance<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    t: f64,
    s: &GeodesicState<N>,
    dt: f64,
    route: Route,
    renormalize: bool,
) -> Result<(GeodesicState<N>, f64)> {
    check_cone(m, t, s)?;
    let mut next = rk4_step(m, t, s, dt, route)?;
    if !m.domain().contains(&next.x) {
        return Err(Error::DomainEdge { t: t + dt, x: next.x.iter().copied().collect() });
    }
    let f = check_cone(m, t + dt, &next)?;
    if renormalize {
        next.xdot /= f;
        let f = check_cone(m, t + dt, &next)?;
        Ok((next, (f - 1.0).abs()))
    } else {
        Ok((next, (f - 1.0).abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrajectoryStatus {
    Completed,
    ConeBoundary,
    DomainEdge,
    Failed(Error),
}

impl TrajectoryStatus {
    pub fn from_error(e: Error) -> Self {
        match e {
            Error::ConeBoundary | Error::OutsideCone | Error::DegenerateDirection => TrajectoryStatus::ConeBoundary,
            Error::DomainEdge { .. } => TrajectoryStatus::DomainEdge,
            other => TrajectoryStatus::Failed(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub samples: Vec<(f64, GeodesicState<N>)>,
    pub route: Route,
    /// Largest `|F(ẋ) - 1|` over all samples.
    pub max_drift: f64,
    pub status: TrajectoryStatus,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> &(f64, GeodesicState<N>) {
        self.samples.last().expect("trajectory has at least the initial sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicOptions {
    pub dt: f64,
    pub route: Route,
    pub renormalize: bool,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self { dt: DEFAULT_DT, route: Route::LorentzRanders, renormalize: true }
    }
}

/// Integrate the cone geodesic leaving `p0` with `F`-unit velocity `v0` up to
/// `t_end`. The step is shrunk slightly so that `t_end` is hit exactly.
/// Failures after the first step truncate the trajectory and set its status.
pub fn integrate_geodesic<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p0: &SpacetimePoint<N>,
    v0: &Vector<N>,
    t_end: f64,
    opts: &GeodesicOptions,
) -> Result<Trajectory<N>> {
    if !(opts.dt > 0.0) {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    let s0 = GeodesicState::new(p0.x, *v0);
    let z = m.zermelo(p0)?;
    let e = finsler_eval(&z, v0)?;
    let f0 = match e.f {
        Some(f) if e.in_domain => f,
        _ => return Err(Error::BadInitialSpeed(f64::NAN)),
    };
    if (f0 - 1.0).abs() > INITIAL_SPEED_TOLERANCE {
        return Err(Error::BadInitialSpeed(f0));
    }
    if e.cone_margin() < CONE_MARGIN {
        return Ok(Trajectory {
            samples: vec![(p0.t, s0)],
            route: opts.route,
            max_drift: (f0 - 1.0).abs(),
            status: TrajectoryStatus::ConeBoundary,
        });
    }
    let span = t_end - p0.t;
    let steps = ((span / opts.dt) - 1e-9).ceil().max(0.0) as usize;
    let dt = if steps > 0 { span / steps as f64 } else { 0.0 };

    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((p0.t, s0));
    let mut max_drift = (f0 - 1.0).abs();
    let mut status = TrajectoryStatus::Completed;
    let mut state = s0;
    for k in 0..steps {
        let t = p0.t + k as f64 * dt;
        match advance(m, t, &state, dt, opts.route, opts.renormalize) {
            Ok((next, drift)) => {
                state = next;
                max_drift = max_drift.max(drift);
                samples.push((p0.t + (k + 1) as f64 * dt, state));
            }
            Err(e) => {
                status = TrajectoryStatus::from_error(e);
                break;
            }
        }
    }
    Ok(Trajectory { samples, route: opts.route, max_drift, status })
}

/// Integrate many geodesics in parallel; output order matches input order and
/// does not depend on the number of worker threads.
pub fn integrate_batch<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    starts: &[(SpacetimePoint<N>, Vector<N>)],
    t_end: f64,
    opts: &GeodesicOptions,
) -> Vec<Result<Trajectory<N>>> {
    starts.par_iter().map(|(p, v)| integrate_geodesic(m, p, v, t_end, opts)).collect()
}
