//! Fire a wave packet at rectangular barriers of increasing width and
//! tabulate the transmitted probability, then compare the exponential
//! decay of ln T against the closed-form rectangular-barrier rate.

use crate::error::{Error, Result};
use crate::harness::config::ScenarioConfig;
use crate::harness::output::{finalize_run, write_table, RunReport, RunSummary};
use crate::harness::stats::fit_exponential;
use crate::quantum::pilot::PilotWaveParams;
use crate::quantum::stepper::{SchrodingerStepper, SplitOperator1D};
use crate::quantum::tunnel::{
    barrier_potential, rectangular_barrier_transmission, tunnelling_sweep, GaussianPacket,
    TunnelRunConfig,
};

pub(super) fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    let m = &cfg.medium;
    let pw = PilotWaveParams::new(1.0, m.omega0, m.c)?;
    let k0 = cfg.f64("barrier", "k0", 4.0)?;
    let sigma = cfg.f64("barrier", "sigma", 2.5)?;
    let packet_x0 = cfg.f64("barrier", "packet_x0", -50.0)?;
    let height_ratio = cfg.f64("barrier", "height_ratio", 2.0)?;
    let widths = cfg.f64_list(
        "barrier",
        "widths",
        &[0.0, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5],
    )?;
    let n = cfg.usize("barrier", "n", 8192)?;
    let dx = cfg.f64("barrier", "dx", 300.0 / 8192.0)?;
    let grid_x0 = cfg.f64("barrier", "grid_x0", -150.0)?;
    let dt = cfg.f64("barrier", "dt", 1e-3)?;
    let t_final = cfg.f64("barrier", "t_final", 33.0)?;
    let margin = cfg.f64("barrier", "measure_margin", 2.0)?;
    if !(height_ratio > 0.0) {
        return Err(Error::Config(format!(
            "height_ratio must be positive, got {height_ratio}"
        )));
    }

    let packet = GaussianPacket {
        x0: packet_x0,
        sigma,
        k0,
    };
    let energy = packet.carrier_energy(&pw);
    let v0 = height_ratio * energy;
    let run_cfg = TunnelRunConfig {
        n,
        dx,
        grid_x0,
        dt,
        t_final,
        measure_margin: margin,
    };
    let table = tunnelling_sweep(&widths, v0, &packet, &run_cfg, &pw)?;

    // Closed-form oracle at the carrier energy: ln T falls with slope
    // -2 kappa once kappa * width is large.
    let kappa = (2.0 * pw.m0 * (v0 - energy).max(0.0)).sqrt() / pw.bbar;
    let mut rows = Vec::with_capacity(table.rows.len());
    let mut fit_w = Vec::new();
    let mut fit_t = Vec::new();
    for row in &table.rows {
        let analytic = rectangular_barrier_transmission(energy, v0, row.width, &pw)?;
        rows.push(vec![row.width, row.transmitted, analytic]);
        if row.width > 0.0 {
            fit_w.push(row.width);
            fit_t.push(row.transmitted);
        }
    }
    if fit_w.len() < 3 {
        return Err(Error::Config(format!(
            "need at least 3 positive widths for the decay fit, got {}",
            fit_w.len()
        )));
    }
    let fit = fit_exponential(&fit_w, &fit_t)?;
    let expected_slope = -2.0 * kappa;

    let mut summary = RunSummary::new(cfg.scenario.name(), cfg.seed);
    summary.metric("carrier_energy", energy);
    summary.metric("barrier_height", v0);
    summary.metric("kappa", kappa);
    summary.metric("fit_slope", fit.slope);
    summary.metric("fit_r_squared", fit.r_squared);
    summary.metric("expected_slope", expected_slope);
    if expected_slope != 0.0 {
        summary.metric(
            "slope_rel_error",
            (fit.slope - expected_slope).abs() / expected_slope.abs(),
        );
    }
    summary.metric("over_barrier", if table.over_barrier { 1.0 } else { 0.0 });
    summary.metric("widths", table.rows.len() as f64);
    if table.over_barrier {
        summary.warn("carrier energy is at or above the barrier top: classical crossing, not tunnelling");
    }

    let t1 = write_table(
        &cfg.out_dir,
        "transmission",
        &["width", "transmitted", "analytic"],
        &rows,
        cfg.format,
    )?;
    let mut files = vec![t1];

    // Optional field snapshots: rerun the widest barrier and dump the
    // packet at the configured cadence.
    if cfg.snapshot_every > 0 {
        let width = fit_w.last().copied().unwrap_or(0.0);
        let potential = barrier_potential(n, dx, grid_x0, v0, width);
        let mut field = packet.realize(n, dx, grid_x0)?;
        let mut stepper = SplitOperator1D::new(&potential, dx, dt, &pw)?;
        let n_steps = (t_final / dt).round() as usize;
        let mut written = 0usize;
        for step in 0..n_steps {
            stepper.schrodinger_step(&mut field)?;
            if (step + 1) % cfg.snapshot_every == 0 {
                let stem = cfg.out_dir.join(format!("field_{written:04}"));
                field.write_snapshot(&stem, (step + 1) as f64 * dt)?;
                files.push(stem.with_extension("bin"));
                files.push(stem.with_extension("hdr"));
                written += 1;
            }
        }
    }

    finalize_run(&cfg.out_dir, summary, files)
}
