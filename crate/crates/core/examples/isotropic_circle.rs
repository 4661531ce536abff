//! Unit circle in a uniform medium: after time t the front is the circle of
//! radius 1 + t.

use conewave::front::{propagate_front_ode, seed_front, InitialFront, PropagationOptions, SourceMode};
use conewave::finsler::EllipseParams;
use conewave::geometry::Point;
use conewave::medium::{Domain, MediumField};

fn main() -> conewave::error::Result<()> {
    let domain = Domain::new(Point::new(-3.0, -3.0), Point::new(3.0, 3.0), 1.0)?;
    let medium = MediumField::homogeneous(domain, EllipseParams::isotropic());
    let f0 = InitialFront::circle(Point::zeros(), 1.0, 256, SourceMode::OutwardOnly)?;
    let seed = seed_front(&medium, &f0)?;
    let opts = PropagationOptions { output_times: vec![0.25, 0.5, 0.75, 1.0], ..Default::default() };
    for front in propagate_front_ode(&medium, &seed, 1.0, &opts)? {
        let err = front.active_markers().map(|m| (m.x.norm() - (1.0 + front.t)).abs()).fold(0.0, f64::max);
        println!("t = {:.2}  markers = {}  max radial error = {err:.2e}", front.t, front.active_count());
    }
    Ok(())
}
