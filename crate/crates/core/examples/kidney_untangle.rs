//! A non-convex ignition line whose bay closes up. Swallowtails are cut out
//! of the front as they form, and the result is compared with the
//! first-arrival grid.

use conewave::front::{propagate_front_ode, seed_front, InitialFront, MarkerStatus, PropagationOptions, SourceMode};
use conewave::finsler::EllipseParams;
use conewave::geometry::Point;
use conewave::medium::{Domain, MediumField};
use conewave::oracle::{compare_front, first_arrival, GridSpec, OracleOptions};

fn main() -> conewave::error::Result<()> {
    let domain = Domain::new(Point::new(-2.5, -2.5), Point::new(2.5, 2.5), 1.0)?;
    let medium = MediumField::homogeneous(domain, EllipseParams::isotropic());
    let f0 = InitialFront::polar(Point::zeros(), 512, SourceMode::OutwardOnly, |phi| {
        1.0 - 0.5 * phi.sin().max(0.0).powi(4)
    })?;
    let seed = seed_front(&medium, &f0)?;
    let opts = PropagationOptions { output_times: (1..=20).map(|k| 0.05 * k as f64).collect(), ..Default::default() };
    let fronts = propagate_front_ode(&medium, &seed, 1.0, &opts)?;
    for f in fronts.iter().step_by(4) {
        let cut = f.retired.iter().filter(|m| m.status == MarkerStatus::Cut).count();
        println!("t = {:.2}  active = {:4}  cut = {cut:4}  loops removed = {}", f.t, f.active_count(), f.diagnostics.loops_removed);
    }
    let grid = first_arrival(&medium, &f0, &GridSpec::covering(&domain, 0.01)?, 1.0, &OracleOptions { stencil_radius: 3, ..Default::default() })?;
    let c = compare_front(fronts.last().unwrap(), &grid)?;
    println!("t = 1: Hausdorff to the first-arrival level set = {:.4}", c.hausdorff);
    Ok(())
}
