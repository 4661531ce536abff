//! First-arrival times on a grid for a wind that turns with time, written as
//! text plus iso-contours.

use conewave::finsler::EllipseParams;
use conewave::front::{InitialFront, SourceMode};
use conewave::geometry::Point;
use conewave::medium::{Domain, MediumField};
use conewave::oracle::{first_arrival, iso_contours, write_arrival_grid, GridSpec, OracleOptions};

fn main() -> conewave::error::Result<()> {
    let domain = Domain::new(Point::new(-3.0, -3.0), Point::new(3.0, 3.0), 1.0)?;
    let medium = MediumField::new(domain, |t, _| EllipseParams::new(1.2, 0.8, 0.0, 0.4 * Point::new(t.cos(), t.sin())));
    let f0 = InitialFront::circle(Point::zeros(), 0.5, 128, SourceMode::OutwardOnly)?;
    let grid = first_arrival(&medium, &f0, &GridSpec::covering(&domain, 0.05)?, 1.0, &OracleOptions::default())?;
    for t in [0.25, 0.5, 0.75, 1.0] {
        let lines = iso_contours(&grid, t);
        let points: usize = lines.iter().map(|l| l.points.len()).sum();
        println!("t = {t:.2}  area = {:.4}  contour lines = {}  points = {points}", grid.area_below(t), lines.len());
    }
    let mut text = Vec::new();
    write_arrival_grid(&mut text, &grid)?;
    println!("arrival grid: {} bytes of text, first line `{}`", text.len(), String::from_utf8_lossy(&text).lines().next().unwrap());
    Ok(())
}
