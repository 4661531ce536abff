use std::collections::HashMap;

use crate::front::{Chain, Front, FrontMarker, MarkerStatus, Orientation, SourceMode};
use crate::geometry::Point;

use super::ArrivalGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct ContourLine {
    pub points: Vec<Point>,
    pub closed: bool,
}

/// Edge of the node lattice: horizontal `(i, j)-(i+1, j)` or vertical
/// `(i, j)-(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

/// Marching squares on `arrival - level`, with unreached nodes treated as
/// arbitrarily late. Segments are linked into polylines.
pub fn iso_contours(grid: &ArrivalGrid, level: f64) -> Vec<ContourLine> {
    let s = &grid.spec;
    let big = 1e30;
    let f = |i: usize, j: usize| {
        let a = grid.get(i, j);
        if a.is_finite() {
            a - level
        } else {
            big
        }
    };
    let point_on = |e: Edge| -> Point {
        let (p, q, a, b) = match e {
            Edge::H(i, j) => (s.node(i, j), s.node(i + 1, j), f(i, j), f(i + 1, j)),
            Edge::V(i, j) => (s.node(i, j), s.node(i, j + 1), f(i, j), f(i, j + 1)),
        };
        let w = (a / (a - b)).clamp(0.0, 1.0);
        p + (q - p) * w
    };

    let mut segs: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..s.ny - 1 {
        for i in 0..s.nx - 1 {
            let v = [f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)];
            let mut code = 0;
            for (k, val) in v.iter().enumerate() {
                if *val <= 0.0 {
                    code |= 1 << k;
                }
            }
            let (bottom, right, top, left) = (Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j));
            let centre_below = v.iter().filter(|x| x.abs() < big).sum::<f64>() / 4.0 <= 0.0;
            match code {
                0 | 15 => {}
                1 | 14 => segs.push((left, bottom)),
                2 | 13 => segs.push((bottom, right)),
                3 | 12 => segs.push((left, right)),
                4 | 11 => segs.push((right, top)),
                6 | 9 => segs.push((bottom, top)),
                7 | 8 => segs.push((left, top)),
                5 => {
                    if centre_below {
                        segs.push((left, top));
                        segs.push((bottom, right));
                    } else {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    }
                }
                10 => {
                    if centre_below {
                        segs.push((left, bottom));
                        segs.push((right, top));
                    } else {
                        segs.push((left, top));
                        segs.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    let mut adj: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segs.iter().enumerate() {
        adj.entry(*a).or_default().push(k);
        adj.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();
    // Open lines first (start at edges with one segment), then loops.
    let mut starts: Vec<usize> = (0..segs.len())
        .filter(|&k| adj[&segs[k].0].len() == 1 || adj[&segs[k].1].len() == 1)
        .collect();
    starts.extend(0..segs.len());
    for start in starts {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segs[start];
        let (first, mut cur) = if adj[&a].len() == 1 { (a, b) } else { (b, a) };
        let mut edges = vec![first, cur];
        loop {
            let next = adj[&cur].iter().copied().find(|&k| !used[k]);
            let Some(k) = next else { break };
            used[k] = true;
            let (p, q) = segs[k];
            cur = if p == cur { q } else { p };
            edges.push(cur);
        }
        let closed = edges.len() > 2 && edges.first() == edges.last();
        if closed {
            edges.pop();
        }
        let mut points: Vec<Point> = edges.into_iter().map(point_on).collect();
        points.dedup_by(|a, b| (*a - *b).norm() < 1e-14 * s.spacing);
        if points.len() >= 2 {
            lines.push(ContourLine { points, closed });
        }
    }
    // Deterministic order: longest first.
    lines.sort_by(|a, b| b.points.len().cmp(&a.points.len()));
    lines
}

/// Package contour lines as a front so they can be written in the front
/// formats.
pub fn contour_to_front(level: f64, lines: &[ContourLine]) -> Front {
    let mut next = 0;
    let chains = lines
        .iter()
        .map(|l| Chain {
            markers: l
                .points
                .iter()
                .map(|p| {
                    next += 1;
                    FrontMarker {
                        s_index: next - 1,
                        x: *p,
                        xdot: Point::zeros(),
                        status: MarkerStatus::Active,
                        lineage: 0.0,
                    }
                })
                .collect(),
            closed: l.closed,
        })
        .collect();
    Front::from_chains(level, chains, Orientation::Ccw, SourceMode::OutwardOnly)
}
