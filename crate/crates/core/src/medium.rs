//! Spacetime fields of velocity ovals.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::finsler::{zermelo_from_ellipse, EllipseParams, SpacetimePoint, Vector, ZermeloData};

/// Spatial bounding box plus time horizon `[0, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain<const N: usize> {
    pub lo: Vector<N>,
    pub hi: Vector<N>,
    pub t_end: f64,
}

impl<const N: usize> Domain<N> {
    pub fn new(lo: Vector<N>, hi: Vector<N>, t_end: f64) -> Result<Self> {
        if (0..N).any(|i| !(hi[i] > lo[i])) {
            return Err(Error::InvalidArgument("domain box has non-positive extent".into()));
        }
        if !(t_end > 0.0) {
            return Err(Error::InvalidArgument("domain time horizon must be positive".into()));
        }
        Ok(Self { lo, hi, t_end })
    }

    pub fn contains(&self, x: &Vector<N>) -> bool {
        (0..N).all(|i| x[i] >= self.lo[i] && x[i] <= self.hi[i])
    }

    /// Largest side of the box.
    pub fn scale(&self) -> f64 {
        (self.hi - self.lo).max()
    }
}

/// Anything that yields Zermelo data on a spacetime domain.
pub trait Medium<const N: usize>: Sync {
    fn domain(&self) -> &Domain<N>;

    fn zermelo(&self, p: &SpacetimePoint<N>) -> Result<ZermeloData<N>>;

    /// True when the data do not depend on the position or time.
    fn is_homogeneous(&self) -> bool {
        false
    }
}

type EllipseSampler = dyn Fn(f64, &Vector2<f64>) -> EllipseParams + Send + Sync;

/// Planar medium given by the velocity ellipse at each `(t, x)`.
#[derive(Clone)]
pub struct MediumField {
    domain: Domain<2>,
    sampler: Arc<EllipseSampler>,
    homogeneous: bool,
}

impl fmt::Debug for MediumField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MediumField")
            .field("domain", &self.domain)
            .field("homogeneous", &self.homogeneous)
            .finish_non_exhaustive()
    }
}

impl MediumField {
    pub fn new(
        domain: Domain<2>,
        sampler: impl Fn(f64, &Vector2<f64>) -> EllipseParams + Send + Sync + 'static,
    ) -> Self {
        Self { domain, sampler: Arc::new(sampler), homogeneous: false }
    }

    pub fn homogeneous(domain: Domain<2>, e: EllipseParams) -> Self {
        Self { domain, sampler: Arc::new(move |_, _| e), homogeneous: true }
    }

    pub fn ellipse(&self, t: f64, x: &Vector2<f64>) -> EllipseParams {
        (self.sampler)(t, x)
    }
}

impl Medium<2> for MediumField {
    fn domain(&self) -> &Domain<2> {
        &self.domain
    }

    fn zermelo(&self, p: &SpacetimePoint<2>) -> Result<ZermeloData<2>> {
        zermelo_from_ellipse(&self.ellipse(p.t, &p.x))
    }

    fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }
}

type ZermeloSampler<const N: usize> = dyn Fn(f64, &Vector<N>) -> Result<ZermeloData<N>> + Send + Sync;

/// Medium of arbitrary dimension given directly by its Zermelo data.
#[derive(Clone)]
pub struct ZermeloField<const N: usize> {
    domain: Domain<N>,
    sampler: Arc<ZermeloSampler<N>>,
}

impl<const N: usize> ZermeloField<N> {
    pub fn new(
        domain: Domain<N>,
        sampler: impl Fn(f64, &Vector<N>) -> Result<ZermeloData<N>> + Send + Sync + 'static,
    ) -> Self {
        Self { domain, sampler: Arc::new(sampler) }
    }
}

impl<const N: usize> Medium<N> for ZermeloField<N> {
    fn domain(&self) -> &Domain<N> {
        &self.domain
    }

    fn zermelo(&self, p: &SpacetimePoint<N>) -> Result<ZermeloData<N>> {
        (self.sampler)(p.t, &p.x)
    }
}

/// Time-independent samples on a regular grid, bilinearly interpolated and
/// clamped at the border.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub origin: Vector2<f64>,
    pub spacing: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `values[iy * nx + ix]`.
    pub values: Vec<f64>,
}

impl GridSamples {
    pub fn new(origin: Vector2<f64>, spacing: f64, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        if nx < 2 || ny < 2 || values.len() != nx * ny || !(spacing > 0.0) {
            return Err(Error::InvalidArgument("grid samples need nx, ny >= 2 and nx*ny values".into()));
        }
        Ok(Self { origin, spacing, nx, ny, values })
    }

    pub fn sample(&self, x: &Vector2<f64>) -> f64 {
        let fx = ((x.x - self.origin.x) / self.spacing).clamp(0.0, (self.nx - 1) as f64);
        let fy = ((x.y - self.origin.y) / self.spacing).clamp(0.0, (self.ny - 1) as f64);
        let ix = (fx.floor() as usize).min(self.nx - 2);
        let iy = (fy.floor() as usize).min(self.ny - 2);
        let (sx, sy) = (fx - ix as f64, fy - iy as f64);
        let at = |i: usize, j: usize| self.values[j * self.nx + i];
        let bottom = at(ix, iy) * (1.0 - sx) + at(ix + 1, iy) * sx;
        let top = at(ix, iy + 1) * (1.0 - sx) + at(ix + 1, iy + 1) * sx;
        bottom * (1.0 - sy) + top * sy
    }
}
