//! Deterministic scenario harness: strict configuration parsing, fit and
//! histogram statistics, reproducible output files, and the scenario
//! runners behind the `dropsim` command.

pub mod config;
pub mod output;
pub mod rng;
pub mod scenarios;
pub mod stats;

pub use config::{RawConfig, Scenario, ScenarioConfig};
pub use output::{
    finalize_run, sha256_hex, write_table, Manifest, ManifestEntry, OutputFormat, RunReport,
    RunSummary,
};
pub use rng::trajectory_rng;
pub use scenarios::run_scenario;
pub use stats::{
    first_local_min_bin, fit_exponential, fit_line, histogram, FitResult, Histogram,
};
