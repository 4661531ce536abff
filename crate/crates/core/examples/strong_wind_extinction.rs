//! Wind twice the spread rate: directions against the wind are not
//! admissible, and the upwind part of the ignition circle never moves.

use conewave::finsler::{finsler_eval, zermelo_from_ellipse, EllipseParams};
use conewave::front::{propagate_front_ode, seed_front, InitialFront, PropagationOptions, SourceMode};
use conewave::geometry::Point;
use conewave::medium::{Domain, MediumField};

fn main() -> conewave::error::Result<()> {
    let e = EllipseParams::new(1.0, 1.0, 0.0, Point::new(2.0, 0.0));
    let z = zermelo_from_ellipse(&e)?;
    for v in [Point::new(1.0, 0.0), Point::new(1.0, 0.5), Point::new(-1.0, 0.0)] {
        let r = finsler_eval(&z, &v)?;
        println!("v = ({:+}, {:+})  F = {:?}  F_l = {:?}  admissible = {}", v.x, v.y, r.f, r.f_l, r.in_domain);
    }

    let domain = Domain::new(Point::new(-2.0, -3.0), Point::new(5.0, 3.0), 1.0)?;
    let medium = MediumField::homogeneous(domain, e);
    let f0 = InitialFront::circle(Point::zeros(), 1.0, 720, SourceMode::OutwardOnly)?;
    let seed = seed_front(&medium, &f0)?;
    for p in &seed.extinction {
        println!("extinction at ({:+.4}, {:+.4}), ring parameter {:.4}", p.x.x, p.x.y, p.lineage);
    }
    let front = propagate_front_ode(&medium, &seed, 1.0, &PropagationOptions::default())?.pop().unwrap();
    println!("t = 1: {} active markers in {} open chain(s), {} extinct", front.active_count(), front.chains.len(), front.retired.len());
    Ok(())
}
