use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use conewave::driver::{error_record, exit_code, run, Command};
use conewave::error::Error;
use conewave::scenario::{builtin_source, parse_scenario, RouteSpec};

/// Wavefront propagation in anisotropic, time-dependent media.
#[derive(Parser)]
#[command(name = "conewave", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario JSON file, or `builtin:NAME` for a shipped scenario.
    scenario: String,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, value_parser = ["formal", "lorentz"])]
    route: Option<String>,
    #[arg(long)]
    markers: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", error_record(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, Error> {
    let text = match cli.scenario.strip_prefix("builtin:") {
        Some(name) => builtin_source(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no built-in scenario `{name}`")))?
            .to_string(),
        None => std::fs::read_to_string(&cli.scenario)?,
    };
    let route = cli.route.as_deref().map(str::parse::<RouteSpec>).transpose()?;
    let scenario = parse_scenario(&text)?.with_overrides(cli.dt, route, cli.markers)?;
    let outcome = run(cli.command, &scenario, &cli.out)?;
    for c in &outcome.checks {
        println!("{}", c.line());
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(if outcome.all_passed() { 0 } else { 4 })
}
