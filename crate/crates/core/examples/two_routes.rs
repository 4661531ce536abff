//! The same cone geodesics computed from the Finsler spacetime function and
//! from the Lorentz metric of the Zermelo data.

use conewave::christoffel::Route;
use conewave::finsler::{finsler_norm, EllipseParams, SpacetimePoint};
use conewave::geodesic::{integrate_geodesic, GeodesicOptions};
use conewave::geometry::Point;
use conewave::medium::{Domain, Medium, MediumField};

fn main() -> conewave::error::Result<()> {
    let domain = Domain::new(Point::new(-4.0, -4.0), Point::new(4.0, 4.0), 1.0)?;
    let medium = MediumField::new(domain, |t, x| {
        EllipseParams::new(
            1.0 + 0.3 * (2.0 * x.x).sin(),
            0.8 + 0.2 * (2.0 * x.y).cos(),
            0.5 * x.x + 0.2 * t,
            Point::new(0.3 * (2.0 * x.y).cos(), 0.2),
        )
    });
    for k in 0..8 {
        let phi = std::f64::consts::TAU * k as f64 / 8.0;
        let p0 = SpacetimePoint::new(0.0, Point::zeros());
        let d = Point::new(phi.cos(), phi.sin());
        let v0 = d / finsler_norm(&medium.zermelo(&p0)?, &d)?;
        let run = |route| integrate_geodesic(&medium, &p0, &v0, 1.0, &GeodesicOptions { route, ..Default::default() });
        let (formal, lorentz) = (run(Route::FormalG)?, run(Route::LorentzRanders)?);
        let gap = formal
            .samples
            .iter()
            .zip(&lorentz.samples)
            .map(|((_, a), (_, b))| (a.x - b.x).norm())
            .fold(0.0, f64::max);
        let end = lorentz.last().1.x;
        println!("phi = {phi:.3}  end = ({:+.4}, {:+.4})  max route gap = {gap:.2e}", end.x, end.y);
    }
    Ok(())
}
