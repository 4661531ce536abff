use crate::geometry::{first_self_intersection, segments, signed_area};

use super::{lerp_lineage, Chain, Front, FrontMarker, MarkerStatus};

/// Remove the loops of every self-intersecting chain. On a ring the smaller
/// of the two loops at a crossing is discarded (a swallowtail lies inside
/// the outer boundary); on an open chain the closed loop is. Removed markers
/// become `Cut` and a marker is inserted at the crossing. Applying the
/// function to its own output changes nothing.
pub fn untangle_front(front: &Front) -> Front {
    let mut out = front.clone();
    let mut chains = Vec::with_capacity(front.chains.len());
    for chain in &front.chains {
        let mut c = chain.clone();
        while let Some(removed) = remove_one_loop(&mut c, &mut out) {
            out.diagnostics.loops_removed += 1;
            out.retired.extend(removed);
        }
        chains.push(c);
    }
    out.chains = chains;
    out
}

fn remove_one_loop(chain: &mut Chain, front: &mut Front) -> Option<Vec<FrontMarker>> {
    let n = chain.markers.len();
    if n < 4 {
        return None;
    }
    let pts = chain.positions();
    let (a, s, b, u) = first_self_intersection(&pts, chain.closed)?;
    let segs: Vec<(usize, usize)> = segments(n, chain.closed).collect();
    let (a0, a1) = segs[a];
    let (b0, b1) = segs[b];
    let p = pts[a0] + (pts[a1] - pts[a0]) * s;

    // Inner loop: vertices a1..=b0. Outer loop (rings only): b1..=a0.
    let inner: Vec<usize> = (a1..=b0).collect();
    let drop_inner = if chain.closed {
        let outer: Vec<usize> = (0..n - inner.len()).map(|k| (b1 + k) % n).collect();
        let loop_area = |idx: &[usize]| {
            let mut ring = vec![p];
            ring.extend(idx.iter().map(|&i| pts[i]));
            signed_area(&ring).abs()
        };
        loop_area(&inner) <= loop_area(&outer)
    } else {
        true
    };

    let ma = &chain.markers;
    let lineage = lerp_lineage(
        lerp_lineage(ma[a0].lineage, ma[a1].lineage, s),
        lerp_lineage(ma[b0].lineage, ma[b1].lineage, u),
        0.5,
    );
    let xdot = 0.5 * (ma[a0].xdot + (ma[a1].xdot - ma[a0].xdot) * s + ma[b0].xdot + (ma[b1].xdot - ma[b0].xdot) * u);
    let corner =
        FrontMarker { s_index: front.fresh_index(), x: p, xdot, status: MarkerStatus::Active, lineage };

    let cut = |m: &FrontMarker| FrontMarker { status: MarkerStatus::Cut, ..*m };
    let (kept, removed): (Vec<FrontMarker>, Vec<FrontMarker>) = if drop_inner {
        let mut kept: Vec<FrontMarker> = ma[..a1].to_vec();
        kept.push(corner);
        kept.extend_from_slice(&ma[b0 + 1..]);
        (kept, ma[a1..=b0].iter().map(cut).collect())
    } else {
        // Keep the inner loop, closed through the crossing.
        let mut kept = vec![corner];
        kept.extend_from_slice(&ma[a1..=b0]);
        let removed = (0..n - inner.len()).map(|k| cut(&ma[(b1 + k) % n])).collect();
        (kept, removed)
    };
    chain.markers = kept;
    Some(removed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::{Orientation, SourceMode};
    use crate::geometry::{is_simple, Point};

    fn chain_of(pts: &[Point], closed: bool) -> Chain {
        let markers = pts
            .iter()
            .enumerate()
            .map(|(k, p)| FrontMarker {
                s_index: k,
                x: *p,
                xdot: Point::zeros(),
                status: MarkerStatus::Active,
                lineage: k as f64 / pts.len() as f64,
            })
            .collect();
        Chain { markers, closed }
    }

    #[test]
    fn simple_front_is_unchanged() {
        let pts: Vec<Point> = (0..32)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 32.0;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        let f = Front::from_chains(0.0, vec![chain_of(&pts, true)], Orientation::Ccw, SourceMode::OutwardOnly);
        assert_eq!(untangle_front(&f), f);
    }

    #[test]
    fn figure_eight_loses_its_smaller_loop() {
        // Gerono lemniscate with the right lobe shrunk to half size.
        let all: Vec<Point> = (0..48)
            .map(|k| {
                let t = std::f64::consts::TAU * (k as f64 + 0.5) / 48.0;
                let scale = if t.sin() > 0.0 { 0.5 } else { 1.0 };
                scale * Point::new(t.sin(), t.sin() * t.cos())
            })
            .collect();
        let f = Front::from_chains(0.0, vec![chain_of(&all, true)], Orientation::Ccw, SourceMode::OutwardOnly);
        assert!(!is_simple(&all, true));
        let g = untangle_front(&f);
        let kept = g.chains[0].positions();
        assert!(is_simple(&kept, true));
        assert!(kept.iter().all(|p| p.x <= 1e-12), "small right lobe should be cut");
        assert_eq!(g.retired.len(), 24);
        assert!(g.retired.iter().all(|m| m.status == MarkerStatus::Cut && m.x.x > 0.0));
        assert_eq!(g.diagnostics.loops_removed, 1);
        assert_eq!(untangle_front(&g), g);
    }
}
