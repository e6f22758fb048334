//! Qualitative demo: strobe the slowly orbiting antiphase pair at the
//! bounce extrema and write the surface height on a polar grid, frame by
//! frame. The dipole crest and its node line visibly precess at the orbit
//! rate while the bounce itself is frozen out by the strobe.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::harness::config::ScenarioConfig;
use crate::harness::output::{finalize_run, write_table, RunReport, RunSummary};
use crate::spin::{rotating_pair_height, RotatingPair};

pub(super) fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    let m = &cfg.medium;
    let frames = cfg.usize("bath", "frames", 8)?;
    let nr = cfg.usize("bath", "radial_points", 16)?;
    let ntheta = cfg.usize("bath", "angular_points", 36)?;
    let kr_max = cfg.f64("bath", "kr_max", 6.0)?;
    let omega_ratio = cfg.f64("pair", "omega_ratio", 0.05)?;
    if frames == 0 || nr < 2 || ntheta < 4 || !(kr_max > 0.0) {
        return Err(Error::Config(format!(
            "need frames >= 1, radial_points >= 2, angular_points >= 4, kr_max > 0; \
             got {frames}, {nr}, {ntheta}, {kr_max}"
        )));
    }
    if !(0.0..1.0).contains(&omega_ratio) {
        return Err(Error::Config(format!(
            "omega_ratio must sit in [0, 1), got {omega_ratio}"
        )));
    }

    let omega = omega_ratio * m.omega0;
    let pair = RotatingPair::new(m.h0, omega, m)?;
    let k = m.wavenumber();
    let tau = m.tau();

    let mut rows = Vec::with_capacity(frames * nr * ntheta);
    let mut max_height = 0.0_f64;
    let mut node_max = 0.0_f64;
    for frame in 0..frames {
        // strobe at whole bounce periods: the fast factor is at its crest
        let t = frame as f64 * tau;
        let node_theta = omega * t + FRAC_PI_2;
        for ir in 0..nr {
            let r = (ir as f64 + 1.0) / nr as f64 * kr_max / k;
            for itheta in 0..ntheta {
                let theta = itheta as f64 * TAU / ntheta as f64;
                let h = rotating_pair_height(&pair, r, theta, t, m)?;
                max_height = max_height.max(h.abs());
                rows.push(vec![frame as f64, t, r, theta, h]);
            }
            node_max = node_max.max(rotating_pair_height(&pair, r, node_theta, t, m)?.abs());
        }
    }
    if !(max_height > 0.0) {
        return Err(Error::Numeric("pair field vanished on the whole grid".into()));
    }

    let mut summary = RunSummary::new(cfg.scenario.name(), cfg.seed);
    summary.metric("frames", frames as f64);
    summary.metric("max_height", max_height);
    summary.metric("node_line_max_abs", node_max);
    summary.metric("node_over_peak", node_max / max_height);
    summary.metric("degrees_per_frame", omega_ratio * 360.0);

    let t1 = write_table(
        &cfg.out_dir,
        "frames",
        &["frame", "t", "r", "theta", "height"],
        &rows,
        cfg.format,
    )?;
    finalize_run(&cfg.out_dir, summary, vec![t1])
}
