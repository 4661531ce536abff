//! Christoffel symbols of the two spacetime metrics describing a medium.
//!
//! * The Lorentz-Finsler metric `G = dt² - F²` has direction-dependent
//!   components `g_ij(v̂)`; its formal Christoffel symbols are built from
//!   coordinate derivatives taken at fixed direction components.
//! * For ellipsoidal media the same cones are those of the classical Lorentz
//!   metric `g = Λ dt² - 2ω dt - h` with `Λ = 1 - h(W,W)`, `ω = h(·, -W)`,
//!   whose Christoffel symbols depend on the point only.
//!
//! Index 0 is time. Spacetime matrices are stored padded to 4×4, with the
//! unused block set to the identity so inverses stay block-diagonal.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::finsler::{axis, fundamental_tensor, SpacetimePoint, Vector};
use crate::medium::Medium;

/// Relative step of the base-point finite differences.
pub const CHRISTOFFEL_FD_STEP: f64 = 1e-4;

pub const MAX_SPACETIME_DIM: usize = 4;

/// `τ ∂/∂t + v`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeVector<const N: usize> {
    pub tau: f64,
    pub v: Vector<N>,
}

impl<const N: usize> SpacetimeVector<N> {
    pub fn new(tau: f64, v: Vector<N>) -> Self {
        Self { tau, v }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { tau: self.tau * lambda, v: self.v * lambda }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Formal Christoffel symbols of `G = dt² - F²`.
    FormalG,
    /// Christoffel symbols of the classical Lorentz metric of the Zermelo data.
    LorentzRanders,
}

/// Spacetime metric components at a point (and direction, for the Finslerian route).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalTensor<const N: usize> {
    g: Matrix4<f64>,
    pub at: SpacetimePoint<N>,
    pub dir: Option<SpacetimeVector<N>>,
}

impl<const N: usize> FundamentalTensor<N> {
    pub const DIM: usize = N + 1;

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i <= N && j <= N);
        self.g[(i, j)]
    }

    /// Padded 4×4 storage.
    pub fn padded(&self) -> &Matrix4<f64> {
        &self.g
    }

    pub fn contract(&self, u: &SpacetimeVector<N>, w: &SpacetimeVector<N>) -> f64 {
        let mut s = 0.0;
        for i in 0..=N {
            for j in 0..=N {
                s += self.g[(i, j)] * component(u, i) * component(w, j);
            }
        }
        s
    }
}

fn component<const N: usize>(v: &SpacetimeVector<N>, i: usize) -> f64 {
    if i == 0 {
        v.tau
    } else {
        v.v[i - 1]
    }
}

fn padded_identity<const N: usize>() -> Matrix4<f64> {
    const { assert!(N >= 1 && N + 1 <= MAX_SPACETIME_DIM, "spatial dimension must be 1..=3") };
    Matrix4::identity()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelEval<const N: usize> {
    gamma: [[[f64; MAX_SPACETIME_DIM]; MAX_SPACETIME_DIM]; MAX_SPACETIME_DIM],
    pub route: Route,
}

impl<const N: usize> ChristoffelEval<N> {
    /// `Γ^k_ij`
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        assert!(k <= N && i <= N && j <= N);
        self.gamma[k][i][j]
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn zero(route: Route) -> Self {
        Self { gamma: [[[0.0; MAX_SPACETIME_DIM]; MAX_SPACETIME_DIM]; MAX_SPACETIME_DIM], route }
    }

    /// `Γ^k_ij y^i y^j` for `k = 0..=N`.
    pub fn contract_twice(&self, y: &[f64; MAX_SPACETIME_DIM]) -> [f64; MAX_SPACETIME_DIM] {
        let mut out = [0.0; MAX_SPACETIME_DIM];
        for (k, o) in out.iter_mut().enumerate().take(N + 1) {
            let mut s = 0.0;
            for i in 0..=N {
                for j in 0..=N {
                    s += self.gamma[k][i][j] * y[i] * y[j];
                }
            }
            *o = s;
        }
        out
    }
}

/// Components of `G = dt² - F²` at `p` in the direction `dir`:
/// `g₀₀ = 1`, `g₀ᵢ = 0`, `gᵢⱼ = -g^F_v(∂ᵢ, ∂ⱼ)`.
pub fn g_matrix_g<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
    dir: &SpacetimeVector<N>,
) -> Result<FundamentalTensor<N>> {
    let z = m.zermelo(p)?;
    let gf = fundamental_tensor(&z, &dir.v)?;
    let mut g = padded_identity::<N>();
    for i in 0..N {
        for j in 0..N {
            g[(i + 1, j + 1)] = -gf[(i, j)];
        }
    }
    Ok(FundamentalTensor { g, at: *p, dir: Some(*dir) })
}

/// Components of `g = Λ dt² - 2ω dt - h`.
pub fn lorentz_metric<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
) -> Result<FundamentalTensor<N>> {
    let z = m.zermelo(p)?;
    let hw = z.h() * z.wind();
    let mut g = padded_identity::<N>();
    g[(0, 0)] = 1.0 - z.h_ww();
    for i in 0..N {
        g[(0, i + 1)] = hw[i];
        g[(i + 1, 0)] = hw[i];
        for j in 0..N {
            g[(i + 1, j + 1)] = -z.h()[(i, j)];
        }
    }
    Ok(FundamentalTensor { g, at: *p, dir: None })
}

pub fn formal_christoffels<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
    dir: &SpacetimeVector<N>,
) -> Result<ChristoffelEval<N>> {
    formal_christoffels_with_step(m, p, dir, CHRISTOFFEL_FD_STEP)
}

pub fn formal_christoffels_with_step<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
    dir: &SpacetimeVector<N>,
    rel_step: f64,
) -> Result<ChristoffelEval<N>> {
    if dir.v.iter().all(|c| *c == 0.0) {
        return Err(Error::ZeroVector);
    }
    christoffels_from(m, p, Route::FormalG, rel_step, |q| Ok(g_matrix_g(m, q, dir)?.g))
}

pub fn lorentz_christoffels<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
) -> Result<ChristoffelEval<N>> {
    lorentz_christoffels_with_step(m, p, CHRISTOFFEL_FD_STEP)
}

pub fn lorentz_christoffels_with_step<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
    rel_step: f64,
) -> Result<ChristoffelEval<N>> {
    christoffels_from(m, p, Route::LorentzRanders, rel_step, |q| Ok(lorentz_metric(m, q)?.g))
}

/// Coordinate derivatives `∂_c g` for `c = 0..=N`, by fourth-order central
/// differences (one-sided in time near the ends of `[0, t_end]`).
pub fn metric_derivatives<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
    rel_step: f64,
    metric: impl Fn(&SpacetimePoint<N>) -> Result<Matrix4<f64>>,
    center: &Matrix4<f64>,
) -> Result<[Matrix4<f64>; MAX_SPACETIME_DIM]> {
    let mut d = [Matrix4::zeros(); MAX_SPACETIME_DIM];
    let domain = m.domain();

    let ht = rel_step * domain.t_end.max(1.0);
    let at_t = |k: f64| metric(&SpacetimePoint::new(p.t + k * ht, p.x));
    d[0] = if p.t - 2.0 * ht < 0.0 {
        (center * -25.0 + at_t(1.0)? * 48.0 - at_t(2.0)? * 36.0 + at_t(3.0)? * 16.0 - at_t(4.0)? * 3.0) / (12.0 * ht)
    } else if p.t + 2.0 * ht > domain.t_end {
        (center * 25.0 - at_t(-1.0)? * 48.0 + at_t(-2.0)? * 36.0 - at_t(-3.0)? * 16.0 + at_t(-4.0)? * 3.0) / (12.0 * ht)
    } else {
        (at_t(-2.0)? - at_t(-1.0)? * 8.0 + at_t(1.0)? * 8.0 - at_t(2.0)?) / (12.0 * ht)
    };

    let hx = rel_step * domain.scale();
    for i in 0..N {
        let e = axis::<N>(i, hx);
        if !domain.contains(&(p.x + e * 2.0)) || !domain.contains(&(p.x - e * 2.0)) {
            return Err(Error::DomainEdge { t: p.t, x: p.x.iter().copied().collect() });
        }
        let at = |k: f64| metric(&SpacetimePoint::new(p.t, p.x + e * k));
        d[i + 1] = (at(-2.0)? - at(-1.0)? * 8.0 + at(1.0)? * 8.0 - at(2.0)?) / (12.0 * hx);
    }
    Ok(d)
}

fn christoffels_from<const N: usize, M: Medium<N> + ?Sized>(
    m: &M,
    p: &SpacetimePoint<N>,
    route: Route,
    rel_step: f64,
    metric: impl Fn(&SpacetimePoint<N>) -> Result<Matrix4<f64>>,
) -> Result<ChristoffelEval<N>> {
    let g = metric(p)?;
    let inv = invert(&g)?;
    if m.is_homogeneous() {
        if !m.domain().contains(&p.x) {
            return Err(Error::DomainEdge { t: p.t, x: p.x.iter().copied().collect() });
        }
        return Ok(ChristoffelEval::zero(route));
    }
    let d = metric_derivatives(m, p, rel_step, metric, &g)?;

    // Lowered symbols Γ_{r,ij} = ½(∂_i g_rj + ∂_j g_ri - ∂_r g_ij).
    let mut lowered = [[[0.0; MAX_SPACETIME_DIM]; MAX_SPACETIME_DIM]; MAX_SPACETIME_DIM];
    for (r, plane) in lowered.iter_mut().enumerate().take(N + 1) {
        for i in 0..=N {
            for j in i..=N {
                let v = 0.5 * (d[i][(r, j)] + d[j][(r, i)] - d[r][(i, j)]);
                plane[i][j] = v;
                plane[j][i] = v;
            }
        }
    }
    let mut out = ChristoffelEval::zero(route);
    for k in 0..=N {
        for i in 0..=N {
            for j in i..=N {
                let v: f64 = (0..=N).map(|r| inv[(k, r)] * lowered[r][i][j]).sum();
                out.gamma[k][i][j] = v;
                out.gamma[k][j][i] = v;
            }
        }
    }
    Ok(out)
}

fn invert(g: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    // Hadamard bound, so the identity padding does not distort the test.
    let bound: f64 = g.row_iter().map(|r| r.norm()).product();
    let det = g.determinant();
    if !det.is_finite() || det.abs() <= 1e-14 * bound {
        return Err(Error::SingularMetric);
    }
    g.try_inverse().ok_or(Error::SingularMetric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsler::{EllipseParams, ZermeloData};
    use crate::medium::{Domain, MediumField, ZermeloField};
    use approx::assert_relative_eq;
    use nalgebra::Vector2;

    fn domain() -> Domain<2> {
        Domain::new(Vector2::new(-5.0, -5.0), Vector2::new(5.0, 5.0), 2.0).unwrap()
    }

    fn block(g: &FundamentalTensor<2>) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = g.get(i, j);
            }
        }
        out
    }

    fn assert_block(g: &FundamentalTensor<2>, expected: [[f64; 3]; 3]) {
        let got = block(g);
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(got[i][j], expected[i][j], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn finsler_metric_blocks() {
        let p = SpacetimePoint::new(0.5, Vector2::new(0.3, -0.2));
        let iso = MediumField::homogeneous(domain(), EllipseParams::isotropic());
        let dir = SpacetimeVector::new(1.0, Vector2::new(1.0, 0.0));
        assert_block(&g_matrix_g(&iso, &p, &dir).unwrap(), [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]);

        let ell = MediumField::homogeneous(domain(), EllipseParams::new(2.0, 1.0, 0.0, Vector2::zeros()));
        let dir = SpacetimeVector::new(1.0, Vector2::new(2.0, 0.0));
        let g = g_matrix_g(&ell, &p, &dir).unwrap();
        assert_block(&g, [[1.0, 0.0, 0.0], [0.0, -0.25, 0.0], [0.0, 0.0, -1.0]]);
        let g2 = g_matrix_g(&ell, &p, &dir.scaled(3.7)).unwrap();
        assert_relative_eq!(g.padded(), g2.padded(), epsilon = 1e-13);
    }

    #[test]
    fn lorentz_metric_blocks() {
        let p = SpacetimePoint::new(0.0, Vector2::zeros());
        let m = |w: [f64; 2]| {
            MediumField::homogeneous(domain(), EllipseParams::new(1.0, 1.0, 0.0, Vector2::new(w[0], w[1])))
        };
        assert_block(&lorentz_metric(&m([0.0, 0.0]), &p).unwrap(), [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]);
        let g = lorentz_metric(&m([0.5, 0.0]), &p).unwrap();
        assert_block(&g, [[0.75, 0.5, 0.0], [0.5, -1.0, 0.0], [0.0, 0.0, -1.0]]);
        // Lightlike vectors of g are exactly the F-unit velocities.
        for u in [Vector2::new(1.5, 0.0), Vector2::new(-0.5, 0.0), Vector2::new(0.5, 1.0)] {
            assert!(g.contract(&SpacetimeVector::new(1.0, u), &SpacetimeVector::new(1.0, u)).abs() < 1e-14);
        }
        let g = lorentz_metric(&m([2.0, 0.0]), &p).unwrap();
        assert_block(&g, [[-3.0, 2.0, 0.0], [2.0, -1.0, 0.0], [0.0, 0.0, -1.0]]);
    }

    #[test]
    fn homogeneous_media_have_flat_symbols() {
        let m = MediumField::homogeneous(domain(), EllipseParams::new(2.0, 1.0, 0.4, Vector2::new(0.3, 0.1)));
        let p = SpacetimePoint::new(0.2, Vector2::new(1.0, 1.0));
        let dir = SpacetimeVector::new(1.0, Vector2::new(0.3, 1.0));
        assert_eq!(formal_christoffels(&m, &p, &dir).unwrap().max_abs(), 0.0);
        assert_eq!(lorentz_christoffels(&m, &p).unwrap().max_abs(), 0.0);

        // Same medium without the homogeneous flag goes through the stencil.
        let e = EllipseParams::new(2.0, 1.0, 0.4, Vector2::new(0.3, 0.1));
        let m = MediumField::new(domain(), move |_, _| e);
        assert!(formal_christoffels(&m, &p, &dir).unwrap().max_abs() < 1e-12);
        assert!(lorentz_christoffels(&m, &p).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn stencil_leaving_the_domain_is_reported() {
        let m = MediumField::new(domain(), |_, x| EllipseParams::new(1.0 + 0.1 * x.x, 1.0, 0.0, Vector2::zeros()));
        let p = SpacetimePoint::new(0.2, Vector2::new(5.0, 0.0));
        assert!(matches!(lorentz_christoffels(&m, &p), Err(Error::DomainEdge { .. })));
    }

    #[test]
    fn singular_metric_is_reported() {
        let mut g = Matrix4::identity();
        g[(1, 1)] = 0.0;
        assert_eq!(invert(&g), Err(Error::SingularMetric));
    }

    #[test]
    fn symbols_are_symmetric_and_direction_homogeneous() {
        let m = MediumField::new(domain(), |t, x| {
            EllipseParams::new(1.2 + 0.1 * x.x.sin(), 0.9 + 0.05 * x.y, 0.3 * t, Vector2::new(0.2 * x.y, 0.1))
        });
        let p = SpacetimePoint::new(0.4, Vector2::new(0.5, -0.3));
        let dir = SpacetimeVector::new(1.0, Vector2::new(0.8, 0.9));
        let a = formal_christoffels(&m, &p, &dir).unwrap();
        let b = formal_christoffels(&m, &p, &dir.scaled(2.5)).unwrap();
        let l = lorentz_christoffels(&m, &p).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(a.get(k, i, j), a.get(k, j, i));
                    assert_eq!(l.get(k, i, j), l.get(k, j, i));
                    assert_relative_eq!(a.get(k, i, j), b.get(k, i, j), epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn time_derivative_is_one_sided_at_the_start() {
        // The sampler panics for negative times, so a central stencil at t = 0 would fail.
        let m = MediumField::new(domain(), |t, _| {
            assert!(t >= 0.0, "sampled at negative time");
            EllipseParams::new(1.0 + 0.5 * t, 1.0, 0.0, Vector2::zeros())
        });
        let p = SpacetimePoint::new(0.0, Vector2::zeros());
        let g = lorentz_christoffels(&m, &p).unwrap();
        // g = diag(1, -1/a², -1) with a = 1 + t/2: ∂_t g₁₁ = 2 a' / a³ = 1 at t = 0,
        // so Γ^0_11 = -½ g^00 ∂_t g₁₁ = -0.5.
        assert_relative_eq!(g.get(0, 1, 1), -0.5, epsilon = 1e-7);
    }

    #[test]
    fn three_dimensional_symbols() {
        let d = Domain::new(Vector::<3>::repeat(-2.0), Vector::<3>::repeat(2.0), 1.0).unwrap();
        let m = ZermeloField::new(d, |_, x: &Vector<3>| {
            let h = nalgebra::Matrix3::from_diagonal(&Vector::<3>::new(1.0 + 0.1 * x.z, 1.0, 1.0));
            ZermeloData::new(h, Vector::<3>::zeros())
        });
        let p = SpacetimePoint::new(0.1, Vector::<3>::new(0.0, 0.0, 0.5));
        let g = lorentz_christoffels(&m, &p).unwrap();
        // g₁₁ = -(1 + 0.1 z): Γ^3_11 = -½ g^33 ∂_3 g_11 = -½ (-1)(-0.1) = -0.05.
        assert_relative_eq!(g.get(3, 1, 1), -0.05, epsilon = 1e-9);
        // Γ^1_13 = ½ g^11 ∂_3 g_11 = ½ (-1/1.05)(-0.1).
        assert_relative_eq!(g.get(1, 1, 3), 0.05 / 1.05, epsilon = 1e-9);
    }
}
