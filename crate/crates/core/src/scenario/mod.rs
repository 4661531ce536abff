//! Scenario documents: JSON descriptions of a medium, an ignition front and
//! solver settings.
//!
//! Analytic media give the ellipse parameters `a`, `b`, `theta`, `w1`, `w2`
//! as expressions in `t`, `x`, `y`; gridded media give row-major samples on
//! a regular grid, interpolated bilinearly.

mod builtins;
mod expr;

pub use builtins::{builtin, builtin_names, builtin_source};
pub use expr::Expression;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::christoffel::Route;
use crate::error::{Error, Result};
use crate::finsler::EllipseParams;
use crate::front::{InitialFront, PropagationOptions, SourceMode};
use crate::geometry::Point;
use crate::medium::{Domain, GridSamples, MediumField};
use crate::oracle::{GridSpec, OracleOptions, DEFAULT_STENCIL_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DomainSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum MediumSpec {
    Analytic { a: Expression, b: Expression, theta: Expression, w1: Expression, w2: Expression },
    Gridded {
        origin: [f64; 2],
        spacing: f64,
        nx: usize,
        ny: usize,
        a: Vec<f64>,
        b: Vec<f64>,
        theta: Vec<f64>,
        w1: Vec<f64>,
        w2: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum FrontSpec {
    Circle { center: [f64; 2], radius: f64 },
    /// Tiny circle standing in for a point ignition.
    Point { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    /// `r(φ) = scale (1 - ½ max(0, sin φ)⁴)`, a disk with a bay on top.
    Kidney { center: [f64; 2], scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ModeSpec {
    OutwardOnly,
    BothSides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteSpec {
    Formal,
    Lorentz,
}

impl RouteSpec {
    pub fn route(self) -> Route {
        match self {
            RouteSpec::Formal => Route::FormalG,
            RouteSpec::Lorentz => Route::LorentzRanders,
        }
    }
}

impl std::str::FromStr for RouteSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formal" => Ok(RouteSpec::Formal),
            "lorentz" => Ok(RouteSpec::Lorentz),
            other => Err(Error::InvalidArgument(format!("unknown route `{other}` (expected formal or lorentz)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolverSpec {
    pub dt: f64,
    pub route: RouteSpec,
    pub renormalize: bool,
    pub marker_count: usize,
    pub output_times: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleSpec {
    pub spacing: f64,
    pub enabled: bool,
    pub stencil_radius: usize,
}

/// Tolerances used by the `check` suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckSpec {
    /// Hausdorff distance between the final front and the oracle level set,
    /// in multiples of the oracle spacing.
    pub oracle_hausdorff: f64,
    pub route_agreement: f64,
    pub k_zero: f64,
    pub orthogonality: f64,
    pub drift: f64,
}

impl Default for CheckSpec {
    fn default() -> Self {
        Self { oracle_hausdorff: 3.0, route_agreement: 1e-5, k_zero: 1e-8, orthogonality: 1e-2, drift: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Scenario {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub domain: DomainSpec,
    pub medium: MediumSpec,
    pub initial_front: FrontSpec,
    pub mode: ModeSpec,
    pub solver: SolverSpec,
    pub oracle: OracleSpec,
    pub checks: CheckSpec,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    description: Option<String>,
    domain: Option<RawDomain>,
    medium: Option<RawMedium>,
    initial_front: Option<RawFront>,
    mode: Option<ModeSpec>,
    solver: Option<RawSolver>,
    oracle: Option<RawOracle>,
    checks: Option<RawChecks>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawDomain {
    x_min: Option<f64>,
    x_max: Option<f64>,
    y_min: Option<f64>,
    y_max: Option<f64>,
    t_end: Option<f64>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawMedium {
    #[serde(rename = "type")]
    kind: Option<String>,
    a: Option<Value>,
    b: Option<Value>,
    theta: Option<Value>,
    w1: Option<Value>,
    w2: Option<Value>,
    origin: Option<[f64; 2]>,
    spacing: Option<f64>,
    nx: Option<usize>,
    ny: Option<usize>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawFront {
    #[serde(rename = "type")]
    kind: Option<String>,
    center: Option<[f64; 2]>,
    radius: Option<f64>,
    vertices: Option<Vec<[f64; 2]>>,
    scale: Option<f64>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawSolver {
    dt: Option<f64>,
    route: Option<RouteSpec>,
    renormalize: Option<bool>,
    marker_count: Option<usize>,
    output_times: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawOracle {
    spacing: Option<f64>,
    enabled: Option<bool>,
    stencil_radius: Option<usize>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawChecks {
    oracle_hausdorff: Option<f64>,
    route_agreement: Option<f64>,
    k_zero: Option<f64>,
    orthogonality: Option<f64>,
    drift: Option<f64>,
}

fn required<T>(v: Option<T>, field: &str) -> Result<T> {
    v.ok_or_else(|| Error::validation(field, "missing required field"))
}

fn positive(v: f64, field: &str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::validation(field, format!("must be positive and finite, got {v}")))
    }
}

fn finite(v: f64, field: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::validation(field, "must be finite"))
    }
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    raw.validate()
}

impl RawScenario {
    fn validate(self) -> Result<Scenario> {
        let name = required(self.name, "name")?;
        if name.trim().is_empty() {
            return Err(Error::validation("name", "must not be empty"));
        }
        let d = required(self.domain, "domain")?;
        let domain = DomainSpec {
            x_min: finite(required(d.x_min, "domain.xMin")?, "domain.xMin")?,
            x_max: finite(required(d.x_max, "domain.xMax")?, "domain.xMax")?,
            y_min: finite(required(d.y_min, "domain.yMin")?, "domain.yMin")?,
            y_max: finite(required(d.y_max, "domain.yMax")?, "domain.yMax")?,
            t_end: positive(required(d.t_end, "domain.tEnd")?, "domain.tEnd")?,
        };
        if domain.x_max <= domain.x_min {
            return Err(Error::validation("domain.xMax", "must exceed domain.xMin"));
        }
        if domain.y_max <= domain.y_min {
            return Err(Error::validation("domain.yMax", "must exceed domain.yMin"));
        }
        let medium = required(self.medium, "medium")?.validate()?;
        let initial_front = required(self.initial_front, "initialFront")?.validate()?;
        let mode = self.mode.unwrap_or(ModeSpec::OutwardOnly);

        let s = self.solver.unwrap_or(RawSolver {
            dt: None,
            route: None,
            renormalize: None,
            marker_count: None,
            output_times: None,
        });
        let solver = SolverSpec {
            dt: positive(s.dt.unwrap_or(crate::geodesic::DEFAULT_DT), "solver.dt")?,
            route: s.route.unwrap_or(RouteSpec::Lorentz),
            renormalize: s.renormalize.unwrap_or(true),
            marker_count: s.marker_count.unwrap_or(256),
            output_times: s.output_times.unwrap_or_else(|| vec![domain.t_end]),
        };
        validate_solver(&solver, domain.t_end)?;

        let min_extent = (domain.x_max - domain.x_min).min(domain.y_max - domain.y_min);
        let o = self.oracle.unwrap_or(RawOracle { spacing: None, enabled: None, stencil_radius: None });
        let oracle = OracleSpec {
            spacing: positive(o.spacing.unwrap_or(min_extent / 200.0), "oracle.spacing")?,
            enabled: o.enabled.unwrap_or(true),
            stencil_radius: o.stencil_radius.unwrap_or(DEFAULT_STENCIL_RADIUS),
        };
        if !(1..=10).contains(&oracle.stencil_radius) {
            return Err(Error::validation("oracle.stencilRadius", "must be between 1 and 10"));
        }
        if oracle.spacing * 4.0 > min_extent {
            return Err(Error::validation("oracle.spacing", "grid would have fewer than 5 nodes per side"));
        }

        let defaults = CheckSpec::default();
        let checks = match self.checks {
            None => defaults,
            Some(c) => CheckSpec {
                oracle_hausdorff: positive(c.oracle_hausdorff.unwrap_or(defaults.oracle_hausdorff), "checks.oracleHausdorff")?,
                route_agreement: positive(c.route_agreement.unwrap_or(defaults.route_agreement), "checks.routeAgreement")?,
                k_zero: positive(c.k_zero.unwrap_or(defaults.k_zero), "checks.kZero")?,
                orthogonality: positive(c.orthogonality.unwrap_or(defaults.orthogonality), "checks.orthogonality")?,
                drift: positive(c.drift.unwrap_or(defaults.drift), "checks.drift")?,
            },
        };

        let scenario = Scenario {
            name,
            description: self.description,
            domain,
            medium,
            initial_front,
            mode,
            solver,
            oracle,
            checks,
        };
        scenario.validate_fields()?;
        Ok(scenario)
    }
}

fn validate_solver(s: &SolverSpec, t_end: f64) -> Result<()> {
    if s.marker_count < 8 {
        return Err(Error::validation("solver.markerCount", "must be at least 8"));
    }
    if s.output_times.is_empty() {
        return Err(Error::validation("solver.outputTimes", "must not be empty"));
    }
    let mut prev = 0.0;
    let mut min_gap = f64::INFINITY;
    for &t in &s.output_times {
        if !(t > prev) || t > t_end * (1.0 + 1e-12) {
            return Err(Error::validation("solver.outputTimes", "must increase strictly within (0, tEnd]"));
        }
        min_gap = min_gap.min(t - prev);
        prev = t;
    }
    if s.dt > min_gap * (1.0 + 1e-9) {
        return Err(Error::validation("solver.dt", format!("must not exceed the smallest output interval {min_gap}")));
    }
    Ok(())
}

fn expression(v: Option<Value>, field: &str) -> Result<Expression> {
    match required(v, field)? {
        Value::String(s) => Expression::parse(&s).map_err(|e| Error::validation(field, e)),
        Value::Number(n) => Ok(Expression::constant(n.as_f64().unwrap_or(f64::NAN))),
        _ => Err(Error::validation(field, "expected an expression string or a number")),
    }
}

fn samples(v: Option<Value>, field: &str, len: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = serde_json::from_value(required(v, field)?)
        .map_err(|e| Error::validation(field, format!("expected an array of numbers: {e}")))?;
    if values.len() != len {
        return Err(Error::validation(field, format!("expected nx*ny = {len} values, found {}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation(field, "values must be finite"));
    }
    Ok(values)
}

impl RawMedium {
    fn validate(self) -> Result<MediumSpec> {
        let kind = required(self.kind, "medium.type")?;
        match kind.as_str() {
            "analytic" => Ok(MediumSpec::Analytic {
                a: expression(self.a, "medium.a")?,
                b: expression(self.b, "medium.b")?,
                theta: expression(self.theta.or(Some(Value::from(0.0))), "medium.theta")?,
                w1: expression(self.w1.or(Some(Value::from(0.0))), "medium.w1")?,
                w2: expression(self.w2.or(Some(Value::from(0.0))), "medium.w2")?,
            }),
            "gridded" => {
                let nx = required(self.nx, "medium.nx")?;
                let ny = required(self.ny, "medium.ny")?;
                if nx < 2 || ny < 2 {
                    return Err(Error::validation("medium.nx", "grids need at least 2x2 samples"));
                }
                let len = nx * ny;
                Ok(MediumSpec::Gridded {
                    origin: required(self.origin, "medium.origin")?,
                    spacing: positive(required(self.spacing, "medium.spacing")?, "medium.spacing")?,
                    nx,
                    ny,
                    a: samples(self.a, "medium.a", len)?,
                    b: samples(self.b, "medium.b", len)?,
                    theta: samples(self.theta, "medium.theta", len)?,
                    w1: samples(self.w1, "medium.w1", len)?,
                    w2: samples(self.w2, "medium.w2", len)?,
                })
            }
            other => Err(Error::validation("medium.type", format!("unknown medium type `{other}`"))),
        }
    }
}

impl RawFront {
    fn validate(self) -> Result<FrontSpec> {
        let kind = required(self.kind, "initialFront.type")?;
        match kind.as_str() {
            "circle" => Ok(FrontSpec::Circle {
                center: self.center.unwrap_or([0.0, 0.0]),
                radius: positive(required(self.radius, "initialFront.radius")?, "initialFront.radius")?,
            }),
            "point" => Ok(FrontSpec::Point {
                center: self.center.unwrap_or([0.0, 0.0]),
                radius: positive(self.radius.unwrap_or(1e-4), "initialFront.radius")?,
            }),
            "polygon" => {
                let vertices = required(self.vertices, "initialFront.vertices")?;
                if vertices.len() < 3 {
                    return Err(Error::validation("initialFront.vertices", "need at least 3 vertices"));
                }
                Ok(FrontSpec::Polygon { vertices })
            }
            "kidney" => Ok(FrontSpec::Kidney {
                center: self.center.unwrap_or([0.0, 0.0]),
                scale: positive(self.scale.unwrap_or(1.0), "initialFront.scale")?,
            }),
            other => Err(Error::validation("initialFront.type", format!("unknown front type `{other}`"))),
        }
    }
}

impl Scenario {
    fn validate_fields(&self) -> Result<()> {
        let dom = self.domain();
        let f0 = self.initial_front().map_err(|e| Error::validation("initialFront", e.to_string()))?;
        if f0.ring().iter().any(|p| !dom.contains(p)) {
            return Err(Error::validation("initialFront", "ignition ring leaves the domain"));
        }
        // The medium must be evaluable on the whole spacetime box.
        let m = self.medium();
        let (lo, hi) = (dom.lo, dom.hi);
        for k in 0..3 {
            let t = dom.t_end * k as f64 / 2.0;
            for j in 0..9 {
                for i in 0..9 {
                    let x = Point::new(
                        lo.x + (hi.x - lo.x) * i as f64 / 8.0,
                        lo.y + (hi.y - lo.y) * j as f64 / 8.0,
                    );
                    let e = m.ellipse(t, &x);
                    let at = format!("at t={t}, x=({}, {})", x.x, x.y);
                    if !(e.a.is_finite() && e.a > 0.0) {
                        return Err(Error::validation("medium.a", format!("must be positive {at}, got {}", e.a)));
                    }
                    if !(e.b.is_finite() && e.b > 0.0) {
                        return Err(Error::validation("medium.b", format!("must be positive {at}, got {}", e.b)));
                    }
                    if !e.theta.is_finite() {
                        return Err(Error::validation("medium.theta", format!("not finite {at}")));
                    }
                    if !(e.w.x.is_finite() && e.w.y.is_finite()) {
                        return Err(Error::validation("medium.w1", format!("wind not finite {at}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> Domain<2> {
        let d = &self.domain;
        Domain { lo: Point::new(d.x_min, d.y_min), hi: Point::new(d.x_max, d.y_max), t_end: d.t_end }
    }

    pub fn source_mode(&self) -> SourceMode {
        match self.mode {
            ModeSpec::OutwardOnly => SourceMode::OutwardOnly,
            ModeSpec::BothSides => SourceMode::BothSides,
        }
    }

    pub fn medium(&self) -> MediumField {
        let domain = self.domain();
        match &self.medium {
            MediumSpec::Analytic { a, b, theta, w1, w2 } => {
                let constant = [a, b, theta, w1, w2].iter().all(|e| e.is_constant());
                if constant {
                    let e = EllipseParams::new(
                        a.eval(0.0, 0.0, 0.0),
                        b.eval(0.0, 0.0, 0.0),
                        theta.eval(0.0, 0.0, 0.0),
                        Point::new(w1.eval(0.0, 0.0, 0.0), w2.eval(0.0, 0.0, 0.0)),
                    );
                    return MediumField::homogeneous(domain, e);
                }
                let (a, b, theta, w1, w2) = (a.clone(), b.clone(), theta.clone(), w1.clone(), w2.clone());
                MediumField::new(domain, move |t, x| {
                    EllipseParams::new(
                        a.eval(t, x.x, x.y),
                        b.eval(t, x.x, x.y),
                        theta.eval(t, x.x, x.y),
                        Point::new(w1.eval(t, x.x, x.y), w2.eval(t, x.x, x.y)),
                    )
                })
            }
            MediumSpec::Gridded { origin, spacing, nx, ny, a, b, theta, w1, w2 } => {
                let grid = |v: &Vec<f64>| {
                    Arc::new(
                        GridSamples::new(Point::new(origin[0], origin[1]), *spacing, *nx, *ny, v.clone())
                            .expect("validated grid"),
                    )
                };
                let (a, b, theta, w1, w2) = (grid(a), grid(b), grid(theta), grid(w1), grid(w2));
                MediumField::new(domain, move |_, x| {
                    EllipseParams::new(
                        a.sample(x),
                        b.sample(x),
                        theta.sample(x),
                        Point::new(w1.sample(x), w2.sample(x)),
                    )
                })
            }
        }
    }

    pub fn initial_front(&self) -> Result<InitialFront> {
        let n = self.solver.marker_count;
        let mode = self.source_mode();
        let pt = |c: &[f64; 2]| Point::new(c[0], c[1]);
        match &self.initial_front {
            FrontSpec::Circle { center, radius } | FrontSpec::Point { center, radius } => {
                InitialFront::circle(pt(center), *radius, n, mode)
            }
            FrontSpec::Polygon { vertices } => {
                let v: Vec<Point> = vertices.iter().map(pt).collect();
                InitialFront::polygon(&v, n, mode)
            }
            FrontSpec::Kidney { center, scale } => InitialFront::polar(pt(center), n, mode, |phi| {
                scale * (1.0 - 0.5 * phi.sin().max(0.0).powi(4))
            }),
        }
    }

    pub fn propagation_options(&self) -> PropagationOptions {
        PropagationOptions {
            dt: self.solver.dt,
            route: self.solver.route.route(),
            renormalize: self.solver.renormalize,
            output_times: self.solver.output_times.clone(),
            ..Default::default()
        }
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::covering(&self.domain(), self.oracle.spacing)
    }

    pub fn oracle_options(&self) -> OracleOptions {
        OracleOptions { stencil_radius: self.oracle.stencil_radius, ..Default::default() }
    }

    /// Pretty JSON that parses back to an equal scenario.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    /// Apply command-line overrides, re-validating the solver block.
    pub fn with_overrides(mut self, dt: Option<f64>, route: Option<RouteSpec>, markers: Option<usize>) -> Result<Self> {
        if let Some(dt) = dt {
            self.solver.dt = positive(dt, "solver.dt")?;
        }
        if let Some(r) = route {
            self.solver.route = r;
        }
        if let Some(n) = markers {
            self.solver.marker_count = n;
        }
        validate_solver(&self.solver, self.domain.t_end)?;
        self.validate_fields()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "minimal",
        "domain": {"xMin": -2, "xMax": 2, "yMin": -2, "yMax": 2, "tEnd": 1},
        "medium": {"type": "analytic", "a": "1", "b": "1"},
        "initialFront": {"type": "circle", "radius": 0.5}
    }"#;

    #[test]
    fn minimal_document_defaults_to_isotropic() {
        let s = parse_scenario(MINIMAL).unwrap();
        let e = s.medium().ellipse(0.3, &Point::new(0.1, 0.2));
        assert_eq!(e, EllipseParams::isotropic());
        assert_eq!(s.solver.output_times, vec![1.0]);
        assert_eq!(s.mode, ModeSpec::OutwardOnly);
    }

    #[test]
    fn expressions_see_the_coordinates() {
        let text = MINIMAL.replace(r#""a": "1""#, r#""a": "1 + 0.1*x""#).replace("xMax\": 2", "xMax\": 6");
        let s = parse_scenario(&text).unwrap();
        assert_eq!(s.medium().ellipse(0.0, &Point::new(5.0, 0.0)).a, 1.5);
    }

    #[test]
    fn missing_t_end_names_the_field() {
        let text = MINIMAL.replace(r#", "tEnd": 1"#, "");
        match parse_scenario(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "domain.tEnd"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let text = "{\n  \"name\": \"x\",\n  \"domain\": {,}\n}";
        match parse_scenario(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 14)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let bad_expr = MINIMAL.replace(r#""b": "1""#, r#""b": "1 +""#);
        assert!(matches!(parse_scenario(&bad_expr), Err(Error::Validation { field, .. }) if field == "medium.b"));
        let negative = MINIMAL.replace(r#""b": "1""#, r#""b": "x""#);
        assert!(matches!(parse_scenario(&negative), Err(Error::Validation { field, .. }) if field == "medium.b"));
        let big_dt = MINIMAL.replace("\"initialFront\"", "\"solver\": {\"dt\": 0.5, \"outputTimes\": [0.2, 1.0]}, \"initialFront\"");
        assert!(matches!(parse_scenario(&big_dt), Err(Error::Validation { field, .. }) if field == "solver.dt"));
        let outside = MINIMAL.replace("\"radius\": 0.5", "\"radius\": 5");
        assert!(matches!(parse_scenario(&outside), Err(Error::Validation { field, .. }) if field == "initialFront"));
    }

    #[test]
    fn round_trip() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(parse_scenario(&s.to_json()).unwrap(), s);
    }
}
