use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::{ArrivalGrid, GridSpec};

/// Plain-text header (`origin`, `spacing`, `dims`, `tmax`) followed by one
/// line per grid row, `inf` for unreached nodes.
pub fn write_arrival_grid<W: Write>(w: &mut W, g: &ArrivalGrid) -> Result<()> {
    let s = &g.spec;
    writeln!(w, "origin {} {}", s.origin.x, s.origin.y)?;
    writeln!(w, "spacing {}", s.spacing)?;
    writeln!(w, "dims {} {}", s.nx, s.ny)?;
    writeln!(w, "tmax {}", g.t_max)?;
    for j in 0..s.ny {
        let row: Vec<String> = (0..s.nx).map(|i| g.get(i, j).to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}

pub fn read_arrival_grid(text: &str) -> Result<ArrivalGrid> {
    let mut lines = text.lines().enumerate();
    let mut header = |key: &str| -> Result<Vec<f64>> {
        let (ln, line) = lines.next().ok_or(Error::Parse { line: 0, column: 1, message: format!("missing `{key}`") })?;
        let err = |m: String| Error::Parse { line: ln + 1, column: 1, message: m };
        let rest = line.strip_prefix(key).ok_or_else(|| err(format!("expected `{key}`")))?;
        rest.split_whitespace().map(|v| v.parse::<f64>().map_err(|e| err(e.to_string()))).collect()
    };
    let origin = header("origin")?;
    let spacing = header("spacing")?;
    let dims = header("dims")?;
    let tmax = header("tmax")?;
    if origin.len() != 2 || spacing.len() != 1 || dims.len() != 2 || tmax.len() != 1 {
        return Err(Error::Parse { line: 1, column: 1, message: "malformed arrival grid header".into() });
    }
    let spec = GridSpec::new(Point::new(origin[0], origin[1]), spacing[0], dims[0] as usize, dims[1] as usize)?;
    let mut arrival = Vec::with_capacity(spec.nx * spec.ny);
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        for (col, v) in line.split_whitespace().enumerate() {
            arrival.push(v.parse::<f64>().map_err(|e| Error::Parse {
                line: ln + 1,
                column: col + 1,
                message: e.to_string(),
            })?);
        }
    }
    if arrival.len() != spec.nx * spec.ny {
        return Err(Error::Parse { line: 0, column: 1, message: "arrival grid has the wrong number of values".into() });
    }
    Ok(ArrivalGrid { spec, arrival, t_max: tmax[0], warnings: Vec::new() })
}
