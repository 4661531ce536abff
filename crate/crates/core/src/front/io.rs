use std::io::Write;

use serde_json::json;

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::{Front, MarkerStatus};

pub const CSV_HEADER: &str = "s_index,x,y,xdot_x,xdot_y,status,lineage_s,chain";

/// One marker row; `chain` is `None` for retired markers.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordRow {
    pub s_index: usize,
    pub x: Point,
    pub xdot: Point,
    pub status: MarkerStatus,
    pub lineage: f64,
    pub chain: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontRecord {
    pub t: f64,
    pub rows: Vec<RecordRow>,
}

impl FrontRecord {
    /// Active chains as polylines, in file order.
    pub fn chains(&self) -> Vec<Vec<Point>> {
        let mut out: Vec<Vec<Point>> = Vec::new();
        for r in &self.rows {
            if let Some(c) = r.chain {
                if out.len() <= c {
                    out.resize(c + 1, Vec::new());
                }
                out[c].push(r.x);
            }
        }
        out
    }
}

/// Write fronts as CSV blocks: a `# front t=... markers=... chains=...`
/// line, the column header, then active markers chain by chain followed by
/// retired ones. Floats use Rust's shortest round-trip formatting.
pub fn write_front_csv<W: Write>(w: &mut W, fronts: &[Front]) -> Result<()> {
    for f in fronts {
        let total = f.active_count() + f.retired.len();
        writeln!(w, "# front t={} markers={} chains={}", f.t, total, f.chains.len())?;
        writeln!(w, "{CSV_HEADER}")?;
        for (c, chain) in f.chains.iter().enumerate() {
            for m in &chain.markers {
                writeln!(w, "{},{},{},{},{},{},{},{}", m.s_index, m.x.x, m.x.y, m.xdot.x, m.xdot.y, m.status, m.lineage, c)?;
            }
        }
        for m in &f.retired {
            writeln!(w, "{},{},{},{},{},{},{},-1", m.s_index, m.x.x, m.x.y, m.xdot.x, m.xdot.y, m.status, m.lineage)?;
        }
    }
    Ok(())
}

pub fn read_front_csv(text: &str) -> Result<Vec<FrontRecord>> {
    let mut out: Vec<FrontRecord> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let err = |msg: String| Error::Parse { line: ln + 1, column: 1, message: msg };
        let line = line.trim();
        if line.is_empty() || line == CSV_HEADER {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# front ") {
            let t = rest
                .split_whitespace()
                .find_map(|kv| kv.strip_prefix("t="))
                .ok_or_else(|| err("block header without t=".into()))?
                .parse::<f64>()
                .map_err(|e| err(e.to_string()))?;
            out.push(FrontRecord { t, rows: Vec::new() });
            continue;
        }
        let block = out.last_mut().ok_or_else(|| err("marker row before any block header".into()))?;
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(err(format!("expected 8 columns, found {}", cols.len())));
        }
        let num = |i: usize| cols[i].parse::<f64>().map_err(|e| err(format!("column {}: {e}", i + 1)));
        let chain: i64 = cols[7].parse().map_err(|e| err(format!("column 8: {e}")))?;
        block.rows.push(RecordRow {
            s_index: cols[0].parse().map_err(|e| err(format!("column 1: {e}")))?,
            x: Point::new(num(1)?, num(2)?),
            xdot: Point::new(num(3)?, num(4)?),
            status: cols[5].parse().map_err(|e: Error| err(e.to_string()))?,
            lineage: num(6)?,
            chain: usize::try_from(chain).ok(),
        });
    }
    Ok(out)
}

/// GeoJSON feature collection with one LineString per active chain (closed
/// chains repeat their first point).
pub fn write_fronts_geojson<W: Write>(w: &mut W, fronts: &[Front]) -> Result<()> {
    let mut features = Vec::new();
    for f in fronts {
        for (c, chain) in f.chains.iter().enumerate() {
            let mut coords: Vec<[f64; 2]> = chain.markers.iter().map(|m| [m.x.x, m.x.y]).collect();
            if chain.closed {
                if let Some(first) = coords.first().copied() {
                    coords.push(first);
                }
            }
            features.push(json!({
                "type": "Feature",
                "properties": { "t": f.t, "chain": c, "closed": chain.closed },
                "geometry": { "type": "LineString", "coordinates": coords },
            }));
        }
    }
    let doc = json!({ "type": "FeatureCollection", "features": features });
    serde_json::to_writer_pretty(&mut *w, &doc).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}
