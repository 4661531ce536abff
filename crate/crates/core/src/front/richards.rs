use crate::error::{Error, Result};
use crate::finsler::{EllipseParams, SpacetimePoint};
use crate::geometry::{segments, Point};
use crate::medium::{Medium, MediumField};

use super::{synchronise, tangents, Front, PropagationOptions};

/// Front velocity of an elliptical medium for the tangent `ds = ∂_s f`,
/// advancing to the right of `ds`:
///
/// ```text
/// P = ds_x sin θ + ds_y cos θ,   Q = ds_x cos θ - ds_y sin θ
/// ∂_t x = ( a² cos θ P - b² sin θ Q) / √(a²P² + b²Q²) + w₁
/// ∂_t y = (-a² sin θ P - b² cos θ Q) / √(a²P² + b²Q²) + w₂
/// ```
pub fn richards_velocity(e: &EllipseParams, ds: &Point) -> Result<Point> {
    let (s, c) = e.theta.sin_cos();
    let p = ds.x * s + ds.y * c;
    let q = ds.x * c - ds.y * s;
    let (a2, b2) = (e.a * e.a, e.b * e.b);
    let den = (a2 * p * p + b2 * q * q).sqrt();
    if !(den > 0.0) {
        return Err(Error::DegenerateSpacing);
    }
    Ok(Point::new((a2 * c * p - b2 * s * q) / den, (-a2 * s * p - b2 * c * q) / den) + e.w)
}

fn velocities(m: &MediumField, t: f64, pts: &[Point], closed: bool) -> Result<Vec<Point>> {
    let scale = m.domain().scale();
    for (i, j) in segments(pts.len(), closed) {
        if (pts[j] - pts[i]).norm() <= 1e-14 * scale {
            return Err(Error::DegenerateSpacing);
        }
    }
    pts.iter()
        .zip(tangents(pts, closed))
        .map(|(x, ds)| {
            if !m.domain().contains(x) {
                return Err(Error::DomainEdge { t, x: vec![x.x, x.y] });
            }
            let e = m.ellipse(t, x);
            let h_ww = e.quadratic_form(&e.w);
            if h_ww >= 1.0 {
                return Err(Error::StrongWindUnsupported(h_ww));
            }
            richards_velocity(&e, &ds)
        })
        .collect()
}

/// One midpoint (RK2) step of the Richards equations on every chain, with
/// `∂_s f` re-estimated at the midpoint.
pub fn richards_step(m: &MediumField, front: &Front, dt: f64) -> Result<Front> {
    let mut out = front.clone();
    let t = front.t;
    for chain in &mut out.chains {
        if chain.markers.len() < 3 {
            continue;
        }
        let pts = chain.positions();
        let k1 = velocities(m, t, &pts, chain.closed)?;
        let mid: Vec<Point> = pts.iter().zip(&k1).map(|(x, v)| x + v * (0.5 * dt)).collect();
        let k2 = velocities(m, t + 0.5 * dt, &mid, chain.closed)?;
        for ((mk, x), v) in chain.markers.iter_mut().zip(&pts).zip(&k2) {
            mk.x = x + v * dt;
            mk.xdot = *v;
        }
    }
    out.t = t + dt;
    // Velocities at the new positions, so the stored state is consistent.
    for chain in &mut out.chains {
        if chain.markers.len() < 3 {
            continue;
        }
        let v = velocities(m, out.t, &chain.positions(), chain.closed)?;
        for (mk, v) in chain.markers.iter_mut().zip(v) {
            mk.xdot = v;
        }
    }
    Ok(out)
}

/// Richards stepping with the same synchronisation as the geodesic route.
/// The medium must be mild along the front; strong wind is rejected.
pub fn propagate_front_richards(
    m: &MediumField,
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
        for k in 0..steps {
            front = richards_step(m, &front, h)?;
            front.t = t0 + (k + 1) as f64 * h;
        }
        front.t = t_next;
        synchronise(m, &mut front, opts)?;
        out.push(front.clone());
    }
    Ok(out)
}

/// Zermelo-side check used by callers that want to pick a route up front.
pub fn front_is_mild(m: &MediumField, front: &Front) -> bool {
    front.active_markers().all(|mk| {
        let e = m.ellipse(front.t, &mk.x);
        e.quadratic_form(&e.w) < 1.0 && m.zermelo(&SpacetimePoint::new(front.t, mk.x)).is_ok()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn aligned_ellipse_velocities() {
        let e = EllipseParams::new(2.0, 1.0, 0.0, Point::zeros());
        assert_relative_eq!(richards_velocity(&e, &Point::new(0.0, 1.0)).unwrap(), Point::new(2.0, 0.0));
        let e = EllipseParams::new(1.0, 1.0, 0.0, Point::new(0.3, -0.2));
        assert_relative_eq!(richards_velocity(&e, &Point::new(0.0, 1.0)).unwrap(), Point::new(1.3, -0.2));
        assert_relative_eq!(richards_velocity(&e, &Point::new(0.0, 5.0)).unwrap(), Point::new(1.3, -0.2));
    }

    #[test]
    fn rotated_major_axis() {
        // θ = π/2 turns the major axis onto the y axis.
        let e = EllipseParams::new(2.0, 1.0, std::f64::consts::FRAC_PI_2, Point::zeros());
        let v = richards_velocity(&e, &Point::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(v, Point::new(0.0, -2.0), epsilon = 1e-12);
    }
}
