//! Burned area under strong wind, from the swept marker quadrilaterals and
//! from the first-arrival grid.

use conewave::finsler::EllipseParams;
use conewave::front::{burned_area, propagate_front_ode, seed_front, InitialFront, PropagationOptions, SourceMode};
use conewave::geometry::Point;
use conewave::medium::{Domain, MediumField};
use conewave::oracle::{first_arrival, GridSpec, OracleOptions};

fn main() -> conewave::error::Result<()> {
    let domain = Domain::new(Point::new(-2.0, -3.0), Point::new(5.0, 3.0), 1.0)?;
    let medium = MediumField::homogeneous(domain, EllipseParams::new(1.0, 1.0, 0.0, Point::new(2.0, 0.0)));
    let f0 = InitialFront::circle(Point::zeros(), 1.0, 720, SourceMode::OutwardOnly)?;
    let seed = seed_front(&medium, &f0)?;
    let opts = PropagationOptions { output_times: (1..=20).map(|k| 0.05 * k as f64).collect(), ..Default::default() };
    let mut fronts = vec![seed.clone()];
    fronts.extend(propagate_front_ode(&medium, &seed, 1.0, &opts)?);
    let sweep = burned_area(&fronts, &f0);

    let grid = first_arrival(&medium, &f0, &GridSpec::covering(&domain, 0.01)?, 1.0, &OracleOptions { stencil_radius: 7, ..Default::default() })?;
    let oracle = grid.area_below(1.0);
    println!("swept area  = {sweep:.4}");
    println!("grid area   = {oracle:.4}");
    println!("difference  = {:.2}%", 100.0 * (sweep - oracle).abs() / oracle);
    Ok(())
}
