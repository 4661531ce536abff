use conewave::finsler::EllipseParams;
use conewave::front::{seed_front, InitialFront, SourceMode};
use conewave::medium::{Domain, Medium, MediumField};
use conewave::oracle::*;
use conewave::geometry::Point;

fn medium(w: [f64; 2]) -> MediumField {
    let d = Domain::new(Point::new(-2.0, -2.0), Point::new(2.0, 2.0), 2.0).unwrap();
    MediumField::homogeneous(d, EllipseParams::new(1.0, 1.0, 0.0, Point::new(w[0], w[1])))
}

fn point_source() -> InitialFront {
    InitialFront::circle(Point::zeros(), 1e-4, 16, SourceMode::OutwardOnly).unwrap()
}

fn grid(m: &MediumField, h: f64) -> GridSpec {
    GridSpec::covering(m.domain(), h).unwrap()
}

#[test]
fn isotropic_point_source_is_euclidean_distance() {
    let m = medium([0.0, 0.0]);
    let g = first_arrival(&m, &point_source(), &grid(&m, 0.05), 2.0, &OracleOptions::default()).unwrap();
    let mut worst = 0.0f64;
    for j in 0..g.spec.ny {
        for i in 0..g.spec.nx {
            let r = g.spec.node(i, j).norm();
            if r > 0.5 && r < 1.9 {
                worst = worst.max((g.get(i, j) - r).abs() / r);
            }
        }
    }
    assert!(worst < 0.03, "{worst}");
}

#[test]
fn downwind_arrival() {
    let m = medium([0.5, 0.0]);
    let g = first_arrival(&m, &point_source(), &grid(&m, 0.05), 2.0, &OracleOptions::default()).unwrap();
    let t = g.value_at(&Point::new(1.5, 0.0)).unwrap();
    assert!((t - 1.0).abs() < 1e-3, "{t}");
}

#[test]
fn strong_wind_upwind_is_unreachable() {
    let m = medium([2.0, 0.0]);
    let g = first_arrival(&m, &point_source(), &grid(&m, 0.05), 2.0, &OracleOptions::default()).unwrap();
    for i in 0..g.spec.nx {
        let j = g.spec.ny / 2;
        let x = g.spec.node(i, j);
        if x.x < -1e-3 {
            assert!(g.get(i, j).is_infinite(), "{x}");
        }
    }
    // Every reached node lies in the cone of half-angle π/6 about +x.
    for j in 0..g.spec.ny {
        for i in 0..g.spec.nx {
            let x = g.spec.node(i, j);
            if g.get(i, j).is_finite() && x.norm() > 0.01 {
                assert!(x.y.abs() <= x.x * (std::f64::consts::FRAC_PI_6).tan() + 1e-9, "{x}");
            }
        }
    }
}

#[test]
fn contour_and_area_of_a_disk() {
    let m = medium([0.0, 0.0]);
    let f0 = InitialFront::circle(Point::zeros(), 0.5, 64, SourceMode::OutwardOnly).unwrap();
    let g = first_arrival(&m, &f0, &grid(&m, 0.02), 1.5, &OracleOptions::default()).unwrap();
    let area = g.area_below(1.0);
    let exact = std::f64::consts::PI * 1.5 * 1.5;
    assert!((area - exact).abs() < 0.03 * exact, "{area}");
    let lines = iso_contours(&g, 1.0);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].closed);
    for p in &lines[0].points {
        assert!((p.norm() - 1.5).abs() < 0.04, "{p}");
    }
}

#[test]
fn compare_front_with_a_seeded_circle() {
    let m = medium([0.0, 0.0]);
    let f0 = InitialFront::circle(Point::zeros(), 0.5, 128, SourceMode::OutwardOnly).unwrap();
    let g = first_arrival(&m, &f0, &grid(&m, 0.02), 1.0, &OracleOptions::default()).unwrap();
    let seeded = seed_front(&m, &f0).unwrap();
    let fronts = conewave::front::propagate_front_ode(&m, &seeded, 0.5, &Default::default()).unwrap();
    let c = compare_front(&fronts[0], &g).unwrap();
    assert!(c.hausdorff < 2.0 * 0.02, "{c:?}");
    // The graph metric overestimates distance, so the front runs ahead of the level set.
    assert!(c.signed_max > 0.0 && c.signed_max <= c.hausdorff + 1e-12, "{c:?}");
    let mut late = fronts[0].clone();
    late.t = 5.0;
    assert!(compare_front(&late, &g).is_err());
}

#[test]
fn text_round_trip() {
    let m = medium([2.0, 0.0]);
    let g = first_arrival(&m, &point_source(), &grid(&m, 0.2), 1.0, &OracleOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_arrival_grid(&mut buf, &g).unwrap();
    let back = read_arrival_grid(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back.spec, g.spec);
    assert_eq!(back.arrival, g.arrival);
    assert!(buf.windows(3).any(|w| w == b"inf"));
}
