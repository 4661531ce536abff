//! Parse a scenario document and run the `propagate` and `check`
//! subcommands on it, writing results to a temporary directory.

use conewave::driver::{run, Command};
use conewave::scenario::parse_scenario;

const SCENARIO: &str = r#"{
  "name": "slope-and-gust",
  "domain": {"xMin": -2, "xMax": 2, "yMin": -2, "yMax": 2, "tEnd": 0.5},
  "medium": {
    "type": "analytic",
    "a": "1 + 0.2*x", "b": "0.8", "theta": "0.3*y",
    "w1": "0.3*exp(-((x-1)^2 + y^2))", "w2": "0"
  },
  "initialFront": {"type": "polygon", "vertices": [[-0.4, -0.3], [0.4, -0.3], [0.4, 0.3], [-0.4, 0.3]]},
  "solver": {"dt": 0.005, "markerCount": 160, "outputTimes": [0.25, 0.5]},
  "oracle": {"spacing": 0.02, "stencilRadius": 3}
}"#;

fn main() -> conewave::error::Result<()> {
    let scenario = parse_scenario(SCENARIO)?;
    let out = std::env::temp_dir().join("conewave-scenario-example");
    let result = run(Command::Propagate, &scenario, &out)?;
    println!("burned area {:.4}", result.summary["burnedArea"]);
    for f in &result.files {
        println!("wrote {}", f.display());
    }
    for c in run(Command::Check, &scenario, &out)?.checks {
        println!("{}", c.line());
    }
    Ok(())
}
