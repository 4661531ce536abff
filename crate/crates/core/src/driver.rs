//! Subcommands of the `conewave` tool. Each one reads a validated scenario,
//! writes its output files into a directory and returns a short summary.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::christoffel::Route;
use crate::error::{Error, Result};
use crate::finsler::{finsler_eval, SpacetimePoint};
use crate::front::{
    burned_area, propagate_front_ode, propagate_front_richards, seed_front, write_front_csv, write_fronts_geojson,
    Front, InitialFront, MarkerStatus,
};
use crate::geodesic::{geodesic_rhs_full, integrate_geodesic, GeodesicOptions, GeodesicState};
use crate::geometry::{hausdorff, is_simple, Curve, Point};
use crate::medium::{Medium, MediumField};
use crate::oracle::{compare_front, contour_to_front, first_arrival, iso_contours, write_arrival_grid, ArrivalGrid};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Fronts from the cone-geodesic ODE.
    Propagate,
    /// Fronts from Richards stepping (mild wind only).
    Richards,
    /// First-arrival grid and its iso-contours.
    Oracle,
    /// Route-vs-route and route-vs-oracle distances.
    Compare,
    /// Extinction points of the upwind flank.
    Extinction,
    /// Invariant suite with pass/fail per property.
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Propagate => "propagate",
            Command::Richards => "richards",
            Command::Oracle => "oracle",
            Command::Compare => "compare",
            Command::Extinction => "extinction",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn below(name: &'static str, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self { name, value, tolerance, passed: value < tolerance, detail: detail.into() }
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {:.3e} (tolerance {:.3e}) {}", self.name, self.value, self.tolerance, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub summary: Value,
    /// Filled by `check` only.
    pub checks: Vec<CheckResult>,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Process exit code for an error: 2 for bad input, 3 for numerical
/// failures, 1 for i/o.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Validation { .. } | Error::InvalidArgument(_) => 2,
        Error::Io(_) => 1,
        _ => 3,
    }
}

/// Single-line JSON error record.
pub fn error_record(e: &Error) -> String {
    let mut rec = json!({ "error": e.kind(), "message": e.to_string(), "exitCode": exit_code(e) });
    match e {
        Error::Parse { line, column, .. } => {
            rec["line"] = json!(line);
            rec["column"] = json!(column);
        }
        Error::Validation { field, .. } => rec["field"] = json!(field),
        _ => {}
    }
    rec.to_string()
}

pub fn run(command: Command, scenario: &Scenario, out_dir: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(out_dir)?;
    let ctx = Context::new(scenario)?;
    match command {
        Command::Propagate => ctx.propagate(out_dir),
        Command::Richards => ctx.richards(out_dir),
        Command::Oracle => ctx.oracle(out_dir),
        Command::Compare => ctx.compare(out_dir),
        Command::Extinction => ctx.extinction(out_dir),
        Command::Check => ctx.check(out_dir),
    }
}

struct Context<'a> {
    s: &'a Scenario,
    medium: MediumField,
    f0: InitialFront,
    seed: Front,
}

fn write_file(path: PathBuf, f: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<PathBuf> {
    let mut w = BufWriter::new(fs::File::create(&path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(path)
}

fn write_json(path: PathBuf, v: &Value) -> Result<PathBuf> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, v).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    })
}

fn curves(front: &Front) -> Vec<(Vec<Point>, bool)> {
    front.chain_positions()
}

fn front_distance(a: &Front, b: &Front, step: f64) -> f64 {
    let (ca, cb) = (curves(a), curves(b));
    let a: Vec<Curve> = ca.iter().map(|(p, c)| Curve { points: p, closed: *c }).collect();
    let b: Vec<Curve> = cb.iter().map(|(p, c)| Curve { points: p, closed: *c }).collect();
    hausdorff(&a, &b, step)
}

fn front_summary(f: &Front) -> Value {
    let count = |st: MarkerStatus| f.retired.iter().filter(|m| m.status == st).count();
    json!({
        "t": f.t,
        "active": f.active_count(),
        "chains": f.chains.len(),
        "extinct": count(MarkerStatus::Extinct),
        "cut": count(MarkerStatus::Cut),
        "leftDomain": count(MarkerStatus::LeftDomain),
        "loopsRemoved": f.diagnostics.loops_removed,
        "resamples": f.diagnostics.resamples,
        "maxDrift": f.diagnostics.max_drift,
        "failures": f.diagnostics.failures,
    })
}

/// Minimal spacing-independent step for densifying curves in distance
/// computations.
fn distance_step(fronts: &[Front]) -> f64 {
    let mut h = f64::INFINITY;
    for f in fronts {
        for c in &f.chains {
            let p = c.positions();
            for w in p.windows(2) {
                h = h.min((w[1] - w[0]).norm());
            }
        }
    }
    if h.is_finite() {
        (h / 2.0).max(1e-4)
    } else {
        1e-3
    }
}

impl<'a> Context<'a> {
    fn new(s: &'a Scenario) -> Result<Self> {
        let medium = s.medium();
        let f0 = s.initial_front()?;
        let seed = seed_front(&medium, &f0)?;
        Ok(Self { s, medium, f0, seed })
    }

    fn ode_fronts(&self) -> Result<Vec<Front>> {
        let mut fronts = vec![self.seed.clone()];
        fronts.extend(propagate_front_ode(&self.medium, &self.seed, self.s.domain.t_end, &self.s.propagation_options())?);
        let last = fronts.last().expect("non-empty");
        if last.active_count() == 0 && last.retired.iter().any(|m| m.status == MarkerStatus::LeftDomain) {
            return Err(Error::Numerical("all markers left the domain".into()));
        }
        Ok(fronts)
    }

    fn richards_fronts(&self) -> Result<Vec<Front>> {
        let mut fronts = vec![self.seed.clone()];
        fronts.extend(propagate_front_richards(
            &self.medium,
            &self.seed,
            self.s.domain.t_end,
            &self.s.propagation_options(),
        )?);
        Ok(fronts)
    }

    fn arrival(&self) -> Result<ArrivalGrid> {
        first_arrival(&self.medium, &self.f0, &self.s.grid_spec()?, self.s.domain.t_end, &self.s.oracle_options())
    }

    fn write_fronts(&self, out: &Path, stem: &str, fronts: &[Front]) -> Result<Vec<PathBuf>> {
        Ok(vec![
            write_file(out.join(format!("{stem}.csv")), |w| write_front_csv(w, fronts))?,
            write_file(out.join(format!("{stem}.geojson")), |w| write_fronts_geojson(w, fronts))?,
        ])
    }

    fn propagate(&self, out: &Path) -> Result<RunOutcome> {
        let fronts = self.ode_fronts()?;
        let summary = json!({
            "scenario": self.s.name,
            "command": "propagate",
            "route": match self.s.solver.route.route() { Route::FormalG => "formal", Route::LorentzRanders => "lorentz" },
            "burnedArea": burned_area(&fronts, &self.f0),
            "fronts": fronts.iter().map(front_summary).collect::<Vec<_>>(),
        });
        let mut files = self.write_fronts(out, "fronts", &fronts)?;
        files.push(write_json(out.join("summary.json"), &summary)?);
        Ok(RunOutcome { files, summary, checks: Vec::new() })
    }

    fn richards(&self, out: &Path) -> Result<RunOutcome> {
        let fronts = self.richards_fronts()?;
        let summary = json!({
            "scenario": self.s.name,
            "command": "richards",
            "burnedArea": burned_area(&fronts, &self.f0),
            "fronts": fronts.iter().map(front_summary).collect::<Vec<_>>(),
        });
        let mut files = self.write_fronts(out, "richards", &fronts)?;
        files.push(write_json(out.join("summary.json"), &summary)?);
        Ok(RunOutcome { files, summary, checks: Vec::new() })
    }

    fn oracle(&self, out: &Path) -> Result<RunOutcome> {
        let grid = self.arrival()?;
        let contours: Vec<Front> = self
            .s
            .solver
            .output_times
            .iter()
            .map(|&t| contour_to_front(t, &iso_contours(&grid, t)))
            .collect();
        let summary = json!({
            "scenario": self.s.name,
            "command": "oracle",
            "spacing": grid.spec.spacing,
            "dims": [grid.spec.nx, grid.spec.ny],
            "stencilRadius": self.s.oracle.stencil_radius,
            "areas": self.s.solver.output_times.iter().map(|&t| json!({"t": t, "area": grid.area_below(t)})).collect::<Vec<_>>(),
            "warnings": grid.warnings,
        });
        let files = vec![
            write_file(out.join("arrival.txt"), |w| write_arrival_grid(w, &grid))?,
            write_file(out.join("contours.csv"), |w| write_front_csv(w, &contours))?,
            write_file(out.join("contours.geojson"), |w| write_fronts_geojson(w, &contours))?,
            write_json(out.join("summary.json"), &summary)?,
        ];
        Ok(RunOutcome { files, summary, checks: Vec::new() })
    }

    fn compare(&self, out: &Path) -> Result<RunOutcome> {
        let ode = self.ode_fronts()?;
        let step = distance_step(&ode);
        let richards = match self.richards_fronts() {
            Ok(r) => Some(r),
            Err(Error::StrongWindUnsupported(_)) => None,
            Err(e) => return Err(e),
        };
        let grid = if self.s.oracle.enabled { Some(self.arrival()?) } else { None };
        let mut rows = Vec::new();
        for (k, f) in ode.iter().enumerate().skip(1) {
            let mut row = json!({ "t": f.t });
            if let Some(r) = &richards {
                row["hausdorffOdeRichards"] = json!(front_distance(f, &r[k], step));
            }
            if let Some(g) = &grid {
                match compare_front(f, g) {
                    Ok(c) => {
                        row["hausdorffOdeOracle"] = json!(c.hausdorff);
                        row["signedOdeOracle"] = json!(c.signed_max);
                    }
                    Err(Error::EmptyContour(_)) => row["hausdorffOdeOracle"] = Value::Null,
                    Err(e) => return Err(e),
                }
            }
            rows.push(row);
        }
        let mut summary = json!({
            "scenario": self.s.name,
            "command": "compare",
            "richards": if richards.is_some() { "ok" } else { "skipped: strong wind" },
            "oracle": if grid.is_some() { "ok" } else { "disabled" },
            "times": rows,
            "burnedAreaOde": burned_area(&ode, &self.f0),
        });
        if let Some(g) = &grid {
            summary["burnedAreaOracle"] = json!(g.area_below(self.s.domain.t_end));
            summary["oracleSpacing"] = json!(g.spec.spacing);
        }
        let files = vec![write_json(out.join("report.json"), &summary)?];
        Ok(RunOutcome { files, summary, checks: Vec::new() })
    }

    /// Extinction points from the seeding and every output front, with
    /// duplicates carried between output times dropped.
    fn extinction_points(&self) -> Result<Vec<crate::front::ExtinctionPoint>> {
        let fronts = self.ode_fronts()?;
        let mut points: Vec<crate::front::ExtinctionPoint> = Vec::new();
        for f in &fronts {
            for p in &f.extinction {
                if !points.iter().any(|q| q.t == p.t && q.x == p.x) {
                    points.push(*p);
                }
            }
        }
        Ok(points)
    }

    fn extinction(&self, out: &Path) -> Result<RunOutcome> {
        let points = self.extinction_points()?;
        // Mirror line: through the centroid of the ignition ring, along the
        // wind there.
        let ring = self.f0.ring();
        let centre = ring.iter().sum::<Point>() / ring.len() as f64;
        let w = self.medium.ellipse(0.0, &centre).w;
        let symmetry = if w.norm() > 0.0 && points.len() == 2 {
            let d = w / w.norm();
            let reflect = |p: &Point| {
                let r = p - centre;
                centre + 2.0 * r.dot(&d) * d - r
            };
            Some((reflect(&points[0].x) - points[1].x).norm())
        } else {
            None
        };
        let summary = json!({
            "scenario": self.s.name,
            "command": "extinction",
            "count": points.len(),
            "points": points.iter().map(|p| json!({"t": p.t, "x": p.x.x, "y": p.x.y, "lineage": p.lineage})).collect::<Vec<_>>(),
            "mirrorDefect": symmetry,
        });
        let files = vec![write_json(out.join("extinction.json"), &summary)?];
        Ok(RunOutcome { files, summary, checks: Vec::new() })
    }

    fn check(&self, out: &Path) -> Result<RunOutcome> {
        let tol = self.s.checks;
        let mut checks = vec![k_zero_check(&self.medium, self.s, tol.k_zero)?];
        checks.push(self.route_check(tol.route_agreement)?);

        let fronts = self.ode_fronts()?;
        let last = fronts.last().expect("non-empty");
        let drift = fronts.iter().map(|f| f.diagnostics.max_drift).fold(0.0, f64::max);
        let renorm = if self.s.solver.renormalize { "after renormalisation" } else { "raw" };
        checks.push(CheckResult::below("lightlike", drift, tol.drift, format!("max |F(xdot) - 1| {renorm}")));
        let ortho = fronts.iter().skip(1).map(|f| f.orthogonality_defect(&self.medium)).collect::<Result<Vec<_>>>()?;
        checks.push(CheckResult::below(
            "orthogonality",
            ortho.into_iter().fold(0.0, f64::max),
            tol.orthogonality,
            "max |g(xdot, tangent)| over output fronts",
        ));
        let tangled = last.chains.iter().filter(|c| !is_simple(&c.positions(), c.closed)).count();
        checks.push(CheckResult::below("simple-front", tangled as f64, 0.5, "self-intersecting active chains"));

        if self.s.oracle.enabled {
            let grid = self.arrival()?;
            let c = compare_front(last, &grid)?;
            let bound = tol.oracle_hausdorff * grid.spec.spacing;
            checks.push(CheckResult::below(
                "oracle",
                c.signed_max.abs(),
                bound,
                format!("front-to-level-set distance at t={}", last.t),
            ));
        }

        let summary = json!({
            "scenario": self.s.name,
            "command": "check",
            "passed": checks.iter().all(|c| c.passed),
            "checks": checks.iter().map(|c| json!({
                "name": c.name, "value": c.value, "tolerance": c.tolerance, "passed": c.passed, "detail": c.detail,
            })).collect::<Vec<_>>(),
        });
        let files = vec![write_json(out.join("check.json"), &summary)?];
        Ok(RunOutcome { files, summary, checks })
    }

    /// Largest distance between formal-route and Lorentz-route geodesics
    /// leaving a few seeded markers.
    fn route_check(&self, tolerance: f64) -> Result<CheckResult> {
        // Velocities close to the cone edge stop within a step or two.
        let markers: Vec<_> = self
            .seed
            .active_markers()
            .filter(|mk| {
                self.medium
                    .zermelo(&SpacetimePoint::new(0.0, mk.x))
                    .and_then(|z| finsler_eval(&z, &mk.xdot))
                    .is_ok_and(|e| e.in_domain && e.f.is_some() && e.cone_margin() > 1e-3)
            })
            .collect();
        if markers.is_empty() {
            return Err(Error::Numerical("no seeded marker is clear of the cone edge".into()));
        }
        let picks = 4.min(markers.len());
        let t_end = self.s.domain.t_end;
        let mut worst = 0.0f64;
        for k in 0..picks {
            let mk = markers[k * markers.len() / picks];
            let p0 = SpacetimePoint::new(0.0, mk.x);
            let opts = |route| GeodesicOptions { dt: self.s.solver.dt, route, renormalize: self.s.solver.renormalize };
            let a = integrate_geodesic(&self.medium, &p0, &mk.xdot, t_end, &opts(Route::FormalG))?;
            let b = integrate_geodesic(&self.medium, &p0, &mk.xdot, t_end, &opts(Route::LorentzRanders))?;
            for ((_, sa), (_, sb)) in a.samples.iter().zip(&b.samples) {
                worst = worst.max((sa.x - sb.x).norm());
            }
        }
        Ok(CheckResult::below("route-agreement", worst, tolerance, format!("{picks} geodesics, formal vs lorentz")))
    }
}

/// Radical inverse of `i` in `base`.
fn halton(mut i: usize, base: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Time component of the geodesic right-hand side, relative to the size of
/// the contracted Christoffel terms, at 1000 quasi-random lightlike states
/// on both routes.
pub fn k_zero_check(m: &MediumField, s: &Scenario, tolerance: f64) -> Result<CheckResult> {
    let d = m.domain();
    // Keep the sample points away from the edge so difference stencils fit.
    let margin = 0.01 * d.scale();
    let mut worst = 0.0f64;
    let mut taken = 0;
    let mut i = 1;
    while taken < 1000 && i < 100_000 {
        let t = s.domain.t_end * halton(i, 2);
        let x = Point::new(
            d.lo.x + margin + (d.hi.x - d.lo.x - 2.0 * margin) * halton(i, 3),
            d.lo.y + margin + (d.hi.y - d.lo.y - 2.0 * margin) * halton(i, 5),
        );
        let phi = std::f64::consts::TAU * halton(i, 7);
        i += 1;
        let z = m.zermelo(&SpacetimePoint::new(t, x))?;
        let dir = Point::new(phi.cos(), phi.sin());
        let e = finsler_eval(&z, &dir)?;
        let Some(f) = e.f.filter(|_| e.in_domain && e.cone_margin() > 1e-3) else { continue };
        let state = GeodesicState::new(x, dir / f);
        for route in [Route::FormalG, Route::LorentzRanders] {
            let r = geodesic_rhs_full(m, t, &state, route)?;
            worst = worst.max(r.time_component.abs() / r.scale.max(1.0));
        }
        taken += 1;
    }
    Ok(CheckResult::below("k-zero", worst, tolerance, format!("{taken} lightlike samples")))
}
