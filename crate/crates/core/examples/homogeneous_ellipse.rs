//! Point ignition in a homogeneous anisotropic medium with wind. The front
//! at time t is t times the velocity ellipse, shifted by the wind.

use std::f64::consts::{FRAC_PI_6, TAU};

use conewave::front::{propagate_front_ode, seed_front, InitialFront, PropagationOptions, SourceMode};
use conewave::finsler::EllipseParams;
use conewave::geometry::{hausdorff, Curve, Point};
use conewave::medium::{Domain, MediumField};

fn main() -> conewave::error::Result<()> {
    let (a, b, theta, w) = (2.0, 1.0, FRAC_PI_6, Point::new(0.3, 0.1));
    let domain = Domain::new(Point::new(-3.0, -3.0), Point::new(3.0, 3.0), 1.0)?;
    let medium = MediumField::homogeneous(domain, EllipseParams::new(a, b, theta, w));
    let f0 = InitialFront::circle(Point::zeros(), 1e-4, 256, SourceMode::OutwardOnly)?;
    let seed = seed_front(&medium, &f0)?;
    let fronts = propagate_front_ode(&medium, &seed, 1.0, &PropagationOptions::default())?;
    let front = fronts.last().unwrap();

    let exact: Vec<Point> = (0..2048)
        .map(|k| {
            let psi = TAU * k as f64 / 2048.0;
            a * psi.cos() * Point::new(theta.cos(), -theta.sin()) + b * psi.sin() * Point::new(theta.sin(), theta.cos()) + w
        })
        .collect();
    let chains = front.chain_positions();
    let computed: Vec<Curve> = chains.iter().map(|(p, c)| Curve { points: p, closed: *c }).collect();
    let h = hausdorff(&computed, &[Curve::closed(&exact)], 1e-3);
    println!("t = 1: Hausdorff distance to the exact ellipse = {h:.2e} (relative {:.2e})", h / a);
    Ok(())
}
