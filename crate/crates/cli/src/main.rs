//! `dropsim`: run one simulation scenario and write its tables, summary,
//! and content manifest into an output directory.
//!
//! Exit codes: 0 success, 2 configuration/usage error, 3 regime error
//! (the requested physics is outside the model's range), 4 numeric
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dropsim_core::harness::{run_scenario, OutputFormat, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "dropsim",
    version,
    about = "Deterministic bouncing-droplet scenario runner",
    after_help = scenario_help()
)]
struct Cli {
    /// Scenario name (see the list below).
    scenario: String,
    /// Configuration file ([section] headers over key = value lines).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; created if missing. Default: ./<scenario>_out.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed fixing every random draw of the run.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Data table format.
    #[arg(long, value_name = "csv|json")]
    format: Option<String>,
}

fn scenario_help() -> String {
    let mut s = String::from("Scenarios:\n");
    for sc in Scenario::ALL {
        s.push_str("  ");
        s.push_str(sc.name());
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> dropsim_core::Result<()> {
    let scenario = Scenario::parse(&cli.scenario)?;
    let default_out = PathBuf::from(format!("{}_out", scenario.name()));
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::from_file(scenario, path, default_out)?,
        None => ScenarioConfig::new(scenario, default_out),
    };
    if let Some(out) = cli.out {
        cfg = cfg.with_out_dir(out);
    }
    if let Some(seed) = cli.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(format) = &cli.format {
        cfg = cfg.with_format(OutputFormat::parse(format)?);
    }

    let report = run_scenario(&cfg)?;
    println!(
        "{}: wrote {} files to {}",
        report.summary.scenario,
        report.files.len(),
        report.out_dir.display()
    );
    for (key, value) in &report.summary.metrics {
        println!("  {key} = {value}");
    }
    for warning in &report.summary.warnings {
        println!("  warning: {warning}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dropsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
