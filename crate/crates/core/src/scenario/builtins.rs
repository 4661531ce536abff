use crate::error::Result;

use super::{parse_scenario, Scenario};

const BUILTINS: &[(&str, &str)] = &[
    ("isotropic-circle", include_str!("../../scenarios/isotropic-circle.json")),
    ("homogeneous-ellipse", include_str!("../../scenarios/homogeneous-ellipse.json")),
    ("constant-mild-wind", include_str!("../../scenarios/constant-mild-wind.json")),
    ("time-varying-wind", include_str!("../../scenarios/time-varying-wind.json")),
    ("spatially-varying-slope", include_str!("../../scenarios/spatially-varying-slope.json")),
    ("kidney-nonconvex", include_str!("../../scenarios/kidney-nonconvex.json")),
    ("strong-wind-constant", include_str!("../../scenarios/strong-wind-constant.json")),
    ("strong-wind-patch", include_str!("../../scenarios/strong-wind-patch.json")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parsed built-in scenario, `None` for an unknown name.
pub fn builtin(name: &str) -> Option<Result<Scenario>> {
    builtin_source(name).map(parse_scenario)
}
