//! Richards stepping against the geodesic front on a spatially varying
//! medium, at two resolutions.

use conewave::front::{propagate_front_ode, propagate_front_richards, seed_front, InitialFront, PropagationOptions, SourceMode};
use conewave::finsler::EllipseParams;
use conewave::geometry::{hausdorff, Curve, Point};
use conewave::medium::{Domain, MediumField};

fn main() -> conewave::error::Result<()> {
    let domain = Domain::new(Point::new(-2.0, -2.0), Point::new(2.0, 2.0), 0.6)?;
    let medium = MediumField::new(domain, |_, x| {
        EllipseParams::new(1.0 + 0.2 * x.x, 0.8 + 0.1 * x.y, 0.3 * x.y, Point::new(0.0, 0.1 * x.x))
    });
    for (n, dt) in [(128, 0.01), (256, 0.005)] {
        let f0 = InitialFront::circle(Point::zeros(), 0.5, n, SourceMode::OutwardOnly)?;
        let seed = seed_front(&medium, &f0)?;
        let opts = PropagationOptions { dt, ..Default::default() };
        let ode = propagate_front_ode(&medium, &seed, 0.6, &opts)?.pop().unwrap();
        let pde = propagate_front_richards(&medium, &seed, 0.6, &opts)?.pop().unwrap();
        let (a, b) = (ode.chain_positions(), pde.chain_positions());
        let ca: Vec<Curve> = a.iter().map(|(p, c)| Curve { points: p, closed: *c }).collect();
        let cb: Vec<Curve> = b.iter().map(|(p, c)| Curve { points: p, closed: *c }).collect();
        println!("markers = {n:4}  dt = {dt}  Hausdorff(ODE, Richards) = {:.2e}", hausdorff(&ca, &cb, 1e-3));
    }
    Ok(())
}
