//! The scenario runners. Each takes a resolved [`ScenarioConfig`], writes
//! its data tables into the output directory, and finishes through
//! [`finalize_run`](crate::harness::output::finalize_run), which digests
//! every produced file into `manifest.json`. Runs are deterministic: the
//! same configuration and seed reproduce every output byte.

mod bath;
mod pair;
mod reflection;
mod slits;
mod speed;
mod spin_tables;
mod torque;
mod tunnel;

use crate::error::{Error, Result};
use crate::harness::config::{Scenario, ScenarioConfig};
use crate::harness::output::RunReport;
use crate::quantum::diffract::SlitKind;

/// Execute one scenario end to end and hand back its report.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| {
        Error::Config(format!(
            "cannot create output directory {}: {e}",
            cfg.out_dir.display()
        ))
    })?;
    match cfg.scenario {
        Scenario::WalkerSpeedSweep => speed::run(cfg),
        Scenario::BoundaryReflection => reflection::run(cfg),
        Scenario::SingleSlit => slits::run(cfg, SlitKind::Single),
        Scenario::DoubleSlit => slits::run(cfg, SlitKind::Double),
        Scenario::TunnellingSweep => tunnel::run(cfg),
        Scenario::OrbitingPair => pair::run(cfg),
        Scenario::SpinTables => spin_tables::run(cfg),
        Scenario::PairAlignmentTorque => torque::run(cfg),
        Scenario::RotatingBathDemo => bath::run(cfg),
    }
}
