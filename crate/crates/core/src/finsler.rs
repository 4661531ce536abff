//! Finsler and conic Finsler norms built from Zermelo data.
//!
//! A medium is described pointwise by a Riemannian metric `h` and a wind `W`.
//! The wave velocities at a point form the displaced ellipsoid
//! `Σ = {u : h(u - W, u - W) = 1}`. For a direction `v`, the time `F(v)` needed
//! to travel along `v` solves
//!
//! ```text
//! (1 - h(W,W)) F² + 2 F h(v,W) - h(v,v) = 0
//! ```
//!
//! With mild wind (`h(W,W) < 1`) there is one positive root and `F` is a
//! Randers norm. With strong wind the origin lies outside `Σ`, only the
//! directions of an open cone `A` are admissible, and the two positive roots
//! give the conic Finsler norm `F` (the smaller time, convex part of `Σ`) and
//! the Lorentzian Finsler norm `F_l` (the larger time, concave part).

use nalgebra::{SMatrix, SVector, Vector2};

use crate::error::{Error, Result};

pub type Vector<const N: usize> = SVector<f64, N>;
pub type Matrix<const N: usize> = SMatrix<f64, N, N>;

/// `len` times the `i`-th coordinate vector.
pub fn axis<const N: usize>(i: usize, len: f64) -> Vector<N> {
    let mut e = Vector::<N>::zeros();
    e[i] = len;
    e
}

/// Tolerance on `|h(W,W) - 1|` below which the wind is treated as critical.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

/// Relative step of the finite-difference fundamental tensor (a second
/// derivative, so roughly the fourth root of machine epsilon).
pub const TENSOR_FD_STEP: f64 = 1e-4;

/// Relative step of the first-derivative orthogonality residual.
pub const RESIDUAL_FD_STEP: f64 = 1e-5;

/// Minimum relative gap `(F_l - F) / F` accepted before a strong-wind direction
/// counts as lying on the cone boundary.
pub const CONE_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint<const N: usize> {
    pub t: f64,
    pub x: Vector<N>,
}

impl<const N: usize> SpacetimePoint<N> {
    pub fn new(t: f64, x: Vector<N>) -> Self {
        Self { t, x }
    }
}

/// Riemannian metric plus wind at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZermeloData<const N: usize> {
    h: Matrix<N>,
    w: Vector<N>,
}

impl<const N: usize> ZermeloData<N> {
    pub fn new(h: Matrix<N>, w: Vector<N>) -> Result<Self> {
        let scale = h.amax().max(f64::MIN_POSITIVE);
        if !h.iter().all(|v| v.is_finite()) || !w.iter().all(|v| v.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        if (h - h.transpose()).amax() > 1e-12 * scale {
            return Err(Error::NotPositiveDefinite);
        }
        let sym = (h + h.transpose()) * 0.5;
        if sym.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { h: sym, w })
    }

    pub fn h(&self) -> &Matrix<N> {
        &self.h
    }

    pub fn wind(&self) -> &Vector<N> {
        &self.w
    }

    /// `h(u, v)`
    pub fn inner(&self, u: &Vector<N>, v: &Vector<N>) -> f64 {
        u.dot(&(self.h * v))
    }

    pub fn h_ww(&self) -> f64 {
        self.inner(&self.w, &self.w)
    }

    /// Coefficients `(1 - h(W,W), h(v,W), h(v,v))` of the travel-time quadratic.
    fn quadratic(&self, v: &Vector<N>) -> (f64, f64, f64) {
        let hv = self.h * v;
        (1.0 - self.h_ww(), hv.dot(&self.w), hv.dot(v))
    }
}

/// Velocity ellipse of a two-dimensional medium: semi-axes `a` (major) and
/// `b`, clockwise rotation `theta`, and the wind displacing its centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub w: Vector2<f64>,
}

impl EllipseParams {
    pub fn new(a: f64, b: f64, theta: f64, w: Vector2<f64>) -> Self {
        Self { a, b, theta, w }
    }

    pub fn isotropic() -> Self {
        Self::new(1.0, 1.0, 0.0, Vector2::zeros())
    }

    /// The quadratic form `Q(v)` whose unit level set is the centred ellipse.
    pub fn quadratic_form(&self, v: &Vector2<f64>) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let p = (v.x * c - v.y * s) / self.a;
        let q = (v.x * s + v.y * c) / self.b;
        p * p + q * q
    }
}

/// Zermelo data of the displaced velocity ellipse.
pub fn zermelo_from_ellipse(e: &EllipseParams) -> Result<ZermeloData<2>> {
    if !(e.a > 0.0 && e.b > 0.0) {
        return Err(Error::NonPositiveAxis { a: e.a, b: e.b });
    }
    let (s, c) = e.theta.sin_cos();
    let (a2, b2) = (e.a * e.a, e.b * e.b);
    let k = 1.0 / (a2 * b2);
    let off = (a2 - b2) * s * c * k;
    let h = Matrix::<2>::new(
        (a2 * s * s + b2 * c * c) * k,
        off,
        off,
        (a2 * c * c + b2 * s * s) * k,
    );
    ZermeloData::new(h, e.w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindKind {
    Mild,
    Critical,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindRegime {
    pub kind: WindKind,
    pub h_ww: f64,
}

pub fn classify_wind<const N: usize>(z: &ZermeloData<N>) -> WindRegime {
    let h_ww = z.h_ww();
    let kind = if (h_ww - 1.0).abs() < CRITICAL_TOLERANCE {
        WindKind::Critical
    } else if h_ww < 1.0 {
        WindKind::Mild
    } else {
        WindKind::Strong
    };
    WindRegime { kind, h_ww }
}

/// Result of evaluating the (possibly conic) norm at one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicEval {
    pub f: Option<f64>,
    pub f_l: Option<f64>,
    pub in_domain: bool,
    pub regime: WindKind,
}

impl ConicEval {
    /// `(F_l - F) / F`; infinite when `F_l` is not defined.
    pub fn cone_margin(&self) -> f64 {
        match (self.f, self.f_l) {
            (Some(f), Some(fl)) => (fl - f) / f,
            _ => f64::INFINITY,
        }
    }

    fn outside(regime: WindKind) -> Self {
        Self { f: None, f_l: None, in_domain: false, regime }
    }
}

pub fn finsler_eval<const N: usize>(z: &ZermeloData<N>, v: &Vector<N>) -> Result<ConicEval> {
    if v.iter().all(|c| *c == 0.0) {
        return Err(Error::ZeroVector);
    }
    let regime = classify_wind(z).kind;
    let (a, b, c) = z.quadratic(v);
    let disc = b * b + a * c;
    let eval = match regime {
        WindKind::Mild => {
            let root = disc.sqrt();
            // Both expressions are the positive root; pick the cancellation-free one.
            let f = if b >= 0.0 { c / (b + root) } else { (root - b) / a };
            ConicEval { f: Some(f), f_l: None, in_domain: true, regime }
        }
        WindKind::Critical => {
            if b > 0.0 {
                let f = c / (b + disc.max(0.0).sqrt());
                ConicEval { f: Some(f), f_l: None, in_domain: true, regime }
            } else {
                ConicEval::outside(regime)
            }
        }
        WindKind::Strong => {
            if b <= 0.0 || disc < 0.0 {
                ConicEval::outside(regime)
            } else {
                let root = disc.sqrt();
                ConicEval {
                    f: Some(c / (b + root)),
                    f_l: Some((b + root) / (-a)),
                    in_domain: disc > 0.0,
                    regime,
                }
            }
        }
    };
    Ok(eval)
}

/// `F(v)` on the convex branch, failing outside the admissible cone.
pub fn finsler_norm<const N: usize>(z: &ZermeloData<N>, v: &Vector<N>) -> Result<f64> {
    let e = finsler_eval(z, v)?;
    match e.f {
        Some(f) if e.in_domain => Ok(f),
        _ => Err(Error::OutsideCone),
    }
}

/// Fundamental tensor `g_v = ½ ∇²(F²)` of the convex branch, in closed form.
///
/// Differentiates the travel-time quadratic implicitly:
/// `∇F = (h v - F h W) / D` with `D = (1 - h(W,W)) F + h(v,W)`, which equals the
/// square root of the discriminant on the convex branch and vanishes on `∂A`.
pub fn fundamental_tensor<const N: usize>(z: &ZermeloData<N>, v: &Vector<N>) -> Result<Matrix<N>> {
    let e = finsler_eval(z, v)?;
    let f = match e.f {
        Some(f) if e.in_domain => f,
        _ => return Err(Error::OutsideCone),
    };
    if e.cone_margin() < CONE_MARGIN {
        return Err(Error::DegenerateDirection);
    }
    let (a, bv, _) = z.quadratic(v);
    let d = a * f + bv;
    if d <= 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let hw = z.h * z.w;
    let grad = (z.h * v - hw * f) / d;
    let mut hess = z.h - hw * grad.transpose() - grad * hw.transpose() - grad * grad.transpose() * a;
    hess /= d;
    Ok(grad * grad.transpose() + hess * f)
}

/// Half Hessian of `norm²` at `v` by central differences with step
/// `TENSOR_FD_STEP · max(1, |v|)`. Works for any norm, including conic ones
/// that return `None` outside their domain.
pub fn fundamental_tensor_fd_with<const N: usize>(
    norm: impl Fn(&Vector<N>) -> Option<f64>,
    v: &Vector<N>,
) -> Result<Matrix<N>> {
    if v.iter().all(|c| *c == 0.0) {
        return Err(Error::ZeroVector);
    }
    let step = TENSOR_FD_STEP * v.norm().max(1.0);
    let sq = |u: Vector<N>| -> Result<f64> {
        norm(&u).map(|f| f * f).ok_or(Error::DegenerateDirection)
    };
    let center = sq(*v)?;
    let mut g = Matrix::<N>::zeros();
    for i in 0..N {
        let ei = axis::<N>(i, step);
        let plus = sq(v + ei)?;
        let minus = sq(v - ei)?;
        g[(i, i)] = 0.5 * (plus - 2.0 * center + minus) / (step * step);
        for j in (i + 1)..N {
            let ej = axis::<N>(j, step);
            let pp = sq(v + ei + ej)?;
            let pm = sq(v + ei - ej)?;
            let mp = sq(v - ei + ej)?;
            let mm = sq(v - ei - ej)?;
            let gij = 0.5 * (pp - pm - mp + mm) / (4.0 * step * step);
            g[(i, j)] = gij;
            g[(j, i)] = gij;
        }
    }
    Ok(g)
}

/// Finite-difference fundamental tensor of the convex branch.
pub fn fundamental_tensor_fd<const N: usize>(z: &ZermeloData<N>, v: &Vector<N>) -> Result<Matrix<N>> {
    let e = finsler_eval(z, v)?;
    if !e.in_domain {
        return Err(Error::OutsideCone);
    }
    fundamental_tensor_fd_with(|u| convex_branch(z, u), v)
}

fn convex_branch<const N: usize>(z: &ZermeloData<N>, u: &Vector<N>) -> Option<f64> {
    finsler_eval(z, u).ok().filter(|e| e.in_domain).and_then(|e| e.f)
}

/// `g_v(v, w) = ½ d/dδ F²(v + δw)` at `δ = 0`, by a central difference on `F²`.
pub fn orthogonality_residual<const N: usize>(
    z: &ZermeloData<N>,
    v: &Vector<N>,
    w: &Vector<N>,
) -> Result<f64> {
    let e = finsler_eval(z, v)?;
    if !e.in_domain {
        return Err(Error::OutsideCone);
    }
    let wn = w.norm();
    if wn == 0.0 {
        return Ok(0.0);
    }
    let delta = RESIDUAL_FD_STEP * v.norm().max(1.0) / wn;
    let sq = |u: Vector<N>| convex_branch(z, &u).map(|f| f * f).ok_or(Error::DegenerateDirection);
    let plus = sq(v + w * delta)?;
    let minus = sq(v - w * delta)?;
    Ok(0.25 * (plus - minus) / delta)
}

/// Which part of the displaced indicatrix a normal lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalBranch {
    /// Convex part: unit for the (conic) Finsler norm `F`.
    Convex,
    /// Concave part: unit for the Lorentzian Finsler norm `F_l`.
    Lorentzian,
    /// On the cone boundary, where the normal is parallel to the tangent.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitNormal<const N: usize> {
    /// Wave velocity `u = v + W`.
    pub u: Vector<N>,
    /// `h`-unit, `h`-orthogonal part `v = u - W`.
    pub v: Vector<N>,
    pub branch: NormalBranch,
}

/// Velocity on the indicatrix that is `F`-orthogonal to `tangent`, with `u - W`
/// on the side of `outward_hint`.
///
/// `u - W` is the `h`-unit vector `h`-orthogonal to the tangent, so `F(u) = 1`
/// on the convex branch (and `F_l(u) = 1` on the concave one). The branch is
/// decided by the sign of `1 + h(W, v)`.
pub fn unit_normal<const N: usize>(
    z: &ZermeloData<N>,
    tangent: &Vector<N>,
    outward_hint: &Vector<N>,
) -> Result<UnitNormal<N>> {
    let ht = z.h * tangent;
    let tt = ht.dot(tangent);
    if !(tt > 0.0) {
        return Err(Error::DegenerateTangent);
    }
    let hint_sq = z.inner(outward_hint, outward_hint);
    let v = outward_hint - tangent * (ht.dot(outward_hint) / tt);
    let vv = z.inner(&v, &v);
    if !(vv > 1e-20 * hint_sq) {
        return Err(Error::DegenerateTangent);
    }
    let v = v / vv.sqrt();
    let side = 1.0 + z.inner(&z.w, &v);
    let branch = if side.abs() < 1e-12 {
        NormalBranch::Boundary
    } else if side > 0.0 {
        NormalBranch::Convex
    } else {
        NormalBranch::Lorentzian
    };
    Ok(UnitNormal { u: v + z.w, v, branch })
}

/// Support point of a planar indicatrix in the direction normal to `tangent`
/// on the side of `outward_hint`: the maximiser of `⟨n, u⟩` over `norm(u) = 1`.
///
/// Uses only evaluations of `norm`, so it applies to arbitrary convex ovals.
pub fn unit_normal_generic(
    norm: impl Fn(&Vector2<f64>) -> Option<f64>,
    tangent: &Vector2<f64>,
    outward_hint: &Vector2<f64>,
) -> Result<Vector2<f64>> {
    let tn = tangent.norm();
    if tn == 0.0 {
        return Err(Error::DegenerateTangent);
    }
    let t = tangent / tn;
    let mut n = Vector2::new(t.y, -t.x);
    let side = n.dot(outward_hint);
    if side.abs() < 1e-12 * outward_hint.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateTangent);
    }
    if side < 0.0 {
        n = -n;
    }
    let support = |phi: f64| -> f64 {
        let e = Vector2::new(phi.cos(), phi.sin());
        match norm(&e) {
            Some(f) if f > 0.0 => n.dot(&e) / f,
            _ => f64::NEG_INFINITY,
        }
    };
    const SAMPLES: usize = 2048;
    let dphi = std::f64::consts::TAU / SAMPLES as f64;
    let (best, _) = (0..SAMPLES)
        .map(|k| (k, support(k as f64 * dphi)))
        .fold((0, f64::NEG_INFINITY), |acc, (k, s)| if s > acc.1 { (k, s) } else { acc });
    if !support(best as f64 * dphi).is_finite() {
        return Err(Error::OutsideCone);
    }
    // Golden-section refinement on the bracketing interval.
    let (mut lo, mut hi) = ((best as f64 - 1.0) * dphi, (best as f64 + 1.0) * dphi);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (support(c), support(d));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = support(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = support(d);
        }
    }
    let phi = 0.5 * (lo + hi);
    let e = Vector2::new(phi.cos(), phi.sin());
    let f = norm(&e).ok_or(Error::OutsideCone)?;
    Ok(e / f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn z2(h: [f64; 4], w: [f64; 2]) -> ZermeloData<2> {
        ZermeloData::new(Matrix::<2>::new(h[0], h[1], h[2], h[3]), Vector2::new(w[0], w[1])).unwrap()
    }

    fn iso(w: [f64; 2]) -> ZermeloData<2> {
        z2([1.0, 0.0, 0.0, 1.0], w)
    }

    #[test]
    fn ellipse_to_metric() {
        let circle = zermelo_from_ellipse(&EllipseParams::new(1.0, 1.0, 0.7, Vector2::zeros())).unwrap();
        assert_relative_eq!(*circle.h(), Matrix::<2>::identity(), epsilon = 1e-15);

        let e = EllipseParams::new(2.0, 1.0, 0.0, Vector2::zeros());
        let z = zermelo_from_ellipse(&e).unwrap();
        assert_relative_eq!(*z.h(), Matrix::<2>::new(0.25, 0.0, 0.0, 1.0), epsilon = 1e-15);
        let v = Vector2::new(0.6, -1.3);
        assert_relative_eq!(z.inner(&v, &v), (v.x / 2.0).powi(2) + v.y * v.y, epsilon = 1e-14);

        let z = zermelo_from_ellipse(&EllipseParams::new(2.0, 1.0, FRAC_PI_2, Vector2::zeros())).unwrap();
        assert_relative_eq!(*z.h(), Matrix::<2>::new(1.0, 0.0, 0.0, 0.25), epsilon = 1e-15);
    }

    #[test]
    fn ellipse_rejects_bad_axes() {
        let e = EllipseParams::new(0.0, 1.0, 0.0, Vector2::zeros());
        assert_eq!(zermelo_from_ellipse(&e), Err(Error::NonPositiveAxis { a: 0.0, b: 1.0 }));
        let e = EllipseParams::new(1.0, -2.0, 0.0, Vector2::zeros());
        assert!(matches!(zermelo_from_ellipse(&e), Err(Error::NonPositiveAxis { .. })));
    }

    #[test]
    fn rejects_indefinite_metric() {
        let h = Matrix::<2>::new(1.0, 0.0, 0.0, -1.0);
        assert_eq!(ZermeloData::new(h, Vector2::zeros()), Err(Error::NotPositiveDefinite));
        let h = Matrix::<2>::new(1.0, 0.5, 0.0, 1.0);
        assert_eq!(ZermeloData::new(h, Vector2::zeros()), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn wind_classification() {
        let r = classify_wind(&iso([0.5, 0.0]));
        assert_eq!(r.kind, WindKind::Mild);
        assert_eq!(r.h_ww, 0.25);
        let r = classify_wind(&iso([1.0, 0.0]));
        assert_eq!(r.kind, WindKind::Critical);
        assert_eq!(r.h_ww, 1.0);
        let r = classify_wind(&iso([2.0, 0.0]));
        assert_eq!(r.kind, WindKind::Strong);
        assert_eq!(r.h_ww, 4.0);
    }

    #[test]
    fn norm_examples() {
        let e = finsler_eval(&iso([0.0, 0.0]), &Vector2::new(3.0, 4.0)).unwrap();
        assert_relative_eq!(e.f.unwrap(), 5.0, epsilon = 1e-15);
        assert!(e.f_l.is_none());

        let e = finsler_eval(&iso([0.5, 0.0]), &Vector2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(e.f.unwrap(), 2.0 / 3.0, epsilon = 1e-15);

        let e = finsler_eval(&iso([2.0, 0.0]), &Vector2::new(1.0, 0.0)).unwrap();
        assert!(e.in_domain);
        assert_relative_eq!(e.f.unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(e.f_l.unwrap(), 1.0, epsilon = 1e-15);

        let e = finsler_eval(&iso([2.0, 0.0]), &Vector2::new(0.0, 1.0)).unwrap();
        assert!(!e.in_domain);
        assert_eq!(finsler_norm(&iso([2.0, 0.0]), &Vector2::new(-1.0, 0.0)), Err(Error::OutsideCone));

        assert_eq!(finsler_eval(&iso([0.0, 0.0]), &Vector2::zeros()), Err(Error::ZeroVector));
    }

    #[test]
    fn critical_wind_is_a_half_plane() {
        let z = iso([1.0, 0.0]);
        // Linear case: 2 F v·W = |v|².
        let e = finsler_eval(&z, &Vector2::new(1.0, 1.0)).unwrap();
        assert_relative_eq!(e.f.unwrap(), 1.0, epsilon = 1e-12);
        assert!(e.f_l.is_none());
        assert!(!finsler_eval(&z, &Vector2::new(-1.0, 1.0)).unwrap().in_domain);
        assert!(!finsler_eval(&z, &Vector2::new(0.0, 1.0)).unwrap().in_domain);
    }

    #[test]
    fn cone_boundary_branches_meet() {
        // Half-angle of the cone for |W| = 2 is asin(1/2) = π/6.
        let z = iso([2.0, 0.0]);
        let mut prev_gap = f64::INFINITY;
        for k in 1..8 {
            let phi = PI / 6.0 - 10f64.powi(-k);
            let e = finsler_eval(&z, &Vector2::new(phi.cos(), phi.sin())).unwrap();
            assert!(e.in_domain);
            let gap = e.f_l.unwrap() - e.f.unwrap();
            assert!(gap > 0.0 && gap < prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-2);
        let phi = PI / 6.0 + 1e-6;
        assert!(!finsler_eval(&z, &Vector2::new(phi.cos(), phi.sin())).unwrap().in_domain);
    }

    #[test]
    fn tensor_examples() {
        let g = fundamental_tensor(&iso([0.0, 0.0]), &Vector2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(g, Matrix::<2>::identity(), epsilon = 1e-14);

        let z = z2([0.25, 0.0, 0.0, 1.0], [0.0, 0.0]);
        for v in [Vector2::new(1.0, 0.0), Vector2::new(-0.3, 2.0), Vector2::new(5.0, 5.0)] {
            assert_relative_eq!(fundamental_tensor(&z, &v).unwrap(), *z.h(), epsilon = 1e-13);
            assert_relative_eq!(fundamental_tensor_fd(&z, &v).unwrap(), *z.h(), epsilon = 1e-5);
        }

        let z = iso([0.5, 0.0]);
        let v = Vector2::new(1.5, 0.0);
        for g in [fundamental_tensor(&z, &v).unwrap(), fundamental_tensor_fd(&z, &v).unwrap()] {
            assert_relative_eq!((v.transpose() * g * v)[0], 1.0, max_relative = 1e-6);
            assert_relative_eq!(g[(0, 1)], g[(1, 0)], epsilon = 1e-12);
        }
    }

    #[test]
    fn analytic_tensor_matches_finite_differences() {
        let z = z2([0.7, 0.2, 0.2, 1.3], [0.3, -0.4]);
        for k in 0..16 {
            let phi = k as f64 * 0.41;
            let v = Vector2::new(phi.cos(), phi.sin()) * (0.5 + 0.1 * k as f64);
            let exact = fundamental_tensor(&z, &v).unwrap();
            let fd = fundamental_tensor_fd(&z, &v).unwrap();
            assert_relative_eq!(exact, fd, epsilon = 2e-5, max_relative = 2e-5);
        }
        // Conic branch, strictly inside the cone.
        let z = iso([2.0, 0.0]);
        let v = Vector2::new(1.0, 0.2);
        let exact = fundamental_tensor(&z, &v).unwrap();
        let fd = fundamental_tensor_fd(&z, &v).unwrap();
        assert_relative_eq!(exact, fd, epsilon = 1e-4, max_relative = 1e-4);
    }

    #[test]
    fn tensor_fails_near_and_outside_the_cone() {
        let z = iso([2.0, 0.0]);
        assert_eq!(fundamental_tensor(&z, &Vector2::new(-1.0, 0.0)), Err(Error::OutsideCone));
        let phi = PI / 6.0 - 1e-14;
        let v = Vector2::new(phi.cos(), phi.sin());
        assert_eq!(fundamental_tensor(&z, &v), Err(Error::DegenerateDirection));
        assert_eq!(fundamental_tensor_fd(&z, &v), Err(Error::DegenerateDirection));
    }

    #[test]
    fn orthogonality_examples() {
        let z = iso([0.0, 0.0]);
        let r = orthogonality_residual(&z, &Vector2::new(1.0, 0.0), &Vector2::new(0.0, 1.0)).unwrap();
        assert!(r.abs() < 1e-12);
        let r = orthogonality_residual(&z, &Vector2::new(1.0, 0.0), &Vector2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(r, 1.0, epsilon = 1e-10);
        let z = iso([0.5, 0.0]);
        let r = orthogonality_residual(&z, &Vector2::new(1.5, 0.0), &Vector2::new(0.0, 1.0)).unwrap();
        assert!(r.abs() < 1e-10);
    }

    #[test]
    fn residual_agrees_with_tensor_contraction() {
        let z = z2([0.7, 0.2, 0.2, 1.3], [0.3, -0.4]);
        let v = Vector2::new(0.4, 1.1);
        let w = Vector2::new(-0.8, 0.3);
        let g = fundamental_tensor(&z, &v).unwrap();
        let r = orthogonality_residual(&z, &v, &w).unwrap();
        assert_relative_eq!(r, (v.transpose() * g * w)[0], epsilon = 1e-9);
    }

    #[test]
    fn normal_examples() {
        let n = unit_normal(&iso([0.0, 0.0]), &Vector2::new(0.0, 1.0), &Vector2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(n.u, Vector2::new(1.0, 0.0), epsilon = 1e-15);

        let z = iso([0.5, 0.0]);
        let n = unit_normal(&z, &Vector2::new(0.0, 1.0), &Vector2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(n.u, Vector2::new(1.5, 0.0), epsilon = 1e-15);
        assert_relative_eq!(finsler_norm(&z, &n.u).unwrap(), 1.0, epsilon = 1e-14);
        assert!(orthogonality_residual(&z, &n.u, &Vector2::new(0.0, 1.0)).unwrap().abs() < 1e-10);

        let z = z2([0.25, 0.0, 0.0, 1.0], [0.0, 0.0]);
        let n = unit_normal(&z, &Vector2::new(0.0, 1.0), &Vector2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(n.u, Vector2::new(2.0, 0.0), epsilon = 1e-14);
        assert_eq!(n.branch, NormalBranch::Convex);
    }

    #[test]
    fn normal_rejects_degenerate_input() {
        let z = iso([0.0, 0.0]);
        let r = unit_normal(&z, &Vector2::zeros(), &Vector2::new(1.0, 0.0));
        assert_eq!(r, Err(Error::DegenerateTangent));
        let r = unit_normal(&z, &Vector2::new(1.0, 1.0), &Vector2::new(2.0, 2.0));
        assert_eq!(r, Err(Error::DegenerateTangent));
    }

    #[test]
    fn strong_wind_normal_branches() {
        let z = iso([2.0, 0.0]);
        // Downwind side of a circle: convex branch.
        let n = unit_normal(&z, &Vector2::new(0.0, 1.0), &Vector2::new(1.0, 0.0)).unwrap();
        assert_eq!(n.branch, NormalBranch::Convex);
        assert_relative_eq!(finsler_norm(&z, &n.u).unwrap(), 1.0, epsilon = 1e-14);
        // Upwind side: the velocity is unit for F_l.
        let n = unit_normal(&z, &Vector2::new(0.0, -1.0), &Vector2::new(-1.0, 0.0)).unwrap();
        assert_eq!(n.branch, NormalBranch::Lorentzian);
        let e = finsler_eval(&z, &n.u).unwrap();
        assert_relative_eq!(e.f_l.unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn generic_normal_matches_randers_fast_path() {
        let z = z2([0.7, 0.2, 0.2, 1.3], [0.3, -0.4]);
        let norm = |u: &Vector2<f64>| convex_branch(&z, u);
        for k in 0..12 {
            let phi = 0.3 + k as f64 * 0.5;
            let tangent = Vector2::new(phi.cos(), phi.sin());
            let hint = Vector2::new(tangent.y, -tangent.x);
            let fast = unit_normal(&z, &tangent, &hint).unwrap().u;
            let generic = unit_normal_generic(norm, &tangent, &hint).unwrap();
            assert_relative_eq!(fast, generic, epsilon = 1e-7);
        }
    }

    #[test]
    fn three_dimensional_metric() {
        let h = Matrix::<3>::new(2.0, 0.1, 0.0, 0.1, 1.0, 0.2, 0.0, 0.2, 0.5);
        let z = ZermeloData::new(h, Vector::<3>::new(0.2, 0.1, -0.3)).unwrap();
        let v = Vector::<3>::new(0.3, -0.7, 1.1);
        let f = finsler_norm(&z, &v).unwrap();
        let x = v / f - z.wind();
        assert_relative_eq!(z.inner(&x, &x), 1.0, epsilon = 1e-12);
        let g = fundamental_tensor(&z, &v).unwrap();
        assert_relative_eq!((v.transpose() * g * v)[0], f * f, max_relative = 1e-12);
        let tangent = Vector::<3>::new(0.0, 1.0, 0.0);
        let n = unit_normal(&z, &tangent, &Vector::<3>::new(1.0, 0.0, 0.5)).unwrap();
        assert_relative_eq!(finsler_norm(&z, &n.u).unwrap(), 1.0, epsilon = 1e-13);
    }
}
