//! Sweep the tray forcing through the walking regime and check that the
//! guidance combination gamma^2 (v^2/c^2 + 1/2) stays proportional to the
//! landing phase T/tau.

use crate::bounce::{kappa_for_anchor, landing_time, walker_speed, DrivingConfig};
use crate::error::{Error, Result};
use crate::harness::config::ScenarioConfig;
use crate::harness::output::{finalize_run, write_table, RunReport, RunSummary};
use crate::harness::stats::fit_line;

pub(super) fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    let m = &cfg.medium;
    let am_min = cfg.f64("sweep", "am_min_over_g", 3.5)?;
    let am_max = cfg.f64("sweep", "am_max_over_g", 4.2)?;
    let steps = cfg.usize("sweep", "steps", 8)?;
    let gamma_anchor = cfg.f64("sweep", "gamma_anchor", 2.6)?;
    let anchor_am = cfg.f64("sweep", "anchor_am_over_g", am_max)?;
    if steps < 3 {
        return Err(Error::Config(format!(
            "sweep needs at least 3 steps to fit a line, got {steps}"
        )));
    }
    if !(am_min < am_max) {
        return Err(Error::Config(format!(
            "sweep range is empty: am_min_over_g = {am_min}, am_max_over_g = {am_max}"
        )));
    }

    // Calibrate the guidance constant so the anchor forcing walks at the
    // anchor gamma, then apply it across the whole sweep.
    let anchor_drive = DrivingConfig::period_doubled(anchor_am * m.g, m)?;
    let t_anchor = landing_time(&anchor_drive, m)?;
    let kappa = kappa_for_anchor(t_anchor, gamma_anchor)?;

    let tau = m.tau();
    let mut rows = Vec::with_capacity(steps);
    let mut xs = Vec::with_capacity(steps);
    let mut ys = Vec::with_capacity(steps);
    let mut gamma_max: f64 = 0.0;
    let mut v_max = 0.0_f64;
    for i in 0..steps {
        let frac = i as f64 / (steps - 1) as f64;
        let am = am_min + frac * (am_max - am_min);
        let drive = DrivingConfig::period_doubled(am * m.g, m)?;
        let t_land = landing_time(&drive, m)?;
        let v = walker_speed(t_land, kappa, m);
        let beta2 = (v / m.c) * (v / m.c);
        let gamma = 1.0 / (1.0 - beta2).sqrt();
        let guidance = gamma * gamma * (beta2 + 0.5);
        xs.push(t_land / tau);
        ys.push(guidance);
        gamma_max = gamma_max.max(gamma);
        v_max = v_max.max(v);
        rows.push(vec![am, t_land, t_land / tau, v, v / m.c, gamma, guidance]);
    }

    let fit = fit_line(&xs, &ys)?;

    let mut summary = RunSummary::new(cfg.scenario.name(), cfg.seed);
    summary.metric("kappa", kappa);
    summary.metric("fit_slope", fit.slope);
    summary.metric("fit_intercept", fit.intercept);
    summary.metric("fit_r_squared", fit.r_squared);
    summary.metric("fit_residual_rms", fit.residual_rms);
    summary.metric("gamma_max", gamma_max);
    summary.metric("v_max_over_c", v_max / m.c);
    summary.metric("points", steps as f64);

    let table = write_table(
        &cfg.out_dir,
        "speed_sweep",
        &[
            "a_m_over_g",
            "t_land",
            "t_over_tau",
            "v",
            "v_over_c",
            "gamma",
            "guidance",
        ],
        &rows,
        cfg.format,
    )?;
    finalize_run(&cfg.out_dir, summary, vec![table])
}
