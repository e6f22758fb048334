//! Tabulate the slowly orbiting antiphase pair: how well the factored
//! snapshot form tracks the exact two-sideband height, where the rotating
//! node line sits, and how the cycle-averaged angular transport falls off
//! with radius.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::harness::config::ScenarioConfig;
use crate::harness::output::{finalize_run, write_table, RunReport, RunSummary};
use crate::spin::{
    angular_transport_proxy, far_field_circulation, rotating_pair_height,
    rotating_pair_height_factored, RotatingPair,
};

pub(super) fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    let m = &cfg.medium;
    let omega_ratio = cfg.f64("pair", "omega_ratio", 0.05)?;
    if !(0.0..1.0).contains(&omega_ratio) {
        return Err(Error::Config(format!(
            "omega_ratio must sit in [0, 1), got {omega_ratio}"
        )));
    }
    let omega = omega_ratio * m.omega0;
    let pair = RotatingPair::new(m.h0, omega, m)?;
    let k = m.wavenumber();
    let tau = m.tau();

    // Exact vs factored height over one bounce cycle in the near zone.
    // The factored form drops a term proportional to sin(omega0 t), so it
    // is tightest at the bounce extrema and loosest mid-cycle.
    let kr_samples = [0.25, 0.5, 0.75, 1.0];
    let n_theta = 8;
    let n_time = 16;
    let mut rows = Vec::new();
    let mut scale = 0.0_f64;
    let mut worst_extrema = 0.0_f64;
    let mut worst_cycle = 0.0_f64;
    let mut samples = Vec::new();
    for it in 0..n_time {
        let t = it as f64 * tau / n_time as f64;
        let at_extremum = it % (n_time / 2) == 0;
        for itheta in 0..n_theta {
            let theta = itheta as f64 * TAU / n_theta as f64;
            for &kr in &kr_samples {
                let r = kr / k;
                let exact = rotating_pair_height(&pair, r, theta, t, m)?;
                let factored = rotating_pair_height_factored(&pair, r, theta, t, m)?;
                scale = scale.max(exact.abs());
                samples.push((t, theta, r, exact, factored, at_extremum));
            }
        }
    }
    if !(scale > 0.0) {
        return Err(Error::Numeric("pair field vanished everywhere sampled".into()));
    }
    for &(t, theta, r, exact, factored, at_extremum) in &samples {
        let dev = (exact - factored).abs() / scale;
        worst_cycle = worst_cycle.max(dev);
        if at_extremum {
            worst_extrema = worst_extrema.max(dev);
        }
        rows.push(vec![t, theta, r, exact, factored]);
    }

    // Node line: at bounce extrema t = n tau the exact height vanishes on
    // the ray theta = omega t + pi/2 for every radius, while the crest ray
    // theta = omega t carries the full amplitude.
    let mut node_max = 0.0_f64;
    let mut peak_max = 0.0_f64;
    let mut node_rows = Vec::new();
    for n in 0..4 {
        let t = n as f64 * tau;
        let node_theta = omega * t + FRAC_PI_2;
        let crest_theta = omega * t;
        for &kr in &[0.5, 1.0, 1.5, 2.0] {
            let r = kr / k;
            let node = rotating_pair_height(&pair, r, node_theta, t, m)?;
            let crest = rotating_pair_height(&pair, r, crest_theta, t, m)?;
            node_max = node_max.max(node.abs());
            peak_max = peak_max.max(crest.abs());
            node_rows.push(vec![t, r, node_theta, node, crest]);
        }
    }

    // Far-field angular transport: log-spaced radii, power-law fit.
    let kr_min = cfg.f64("pair", "kr_min", 12.0)?;
    let kr_max = cfg.f64("pair", "kr_max", 90.0)?;
    let count = cfg.usize("pair", "kr_count", 12)?;
    if !(kr_min > 0.0) || !(kr_max > kr_min) || count < 2 {
        return Err(Error::Config(format!(
            "need 0 < kr_min < kr_max and kr_count >= 2; got {kr_min}, {kr_max}, {count}"
        )));
    }
    let radii: Vec<f64> = (0..count)
        .map(|i| {
            let f = i as f64 / (count - 1) as f64;
            (kr_min * (kr_max / kr_min).powf(f)) / k
        })
        .collect();
    let circ = far_field_circulation(1, &radii, m)?;
    let mut circ_rows = Vec::with_capacity(radii.len());
    for &r in &radii {
        circ_rows.push(vec![r, k * r, angular_transport_proxy(1, r, m)?]);
    }

    let mut summary = RunSummary::new(cfg.scenario.name(), cfg.seed);
    summary.metric("agreement_worst_extrema", worst_extrema);
    summary.metric("agreement_worst_cycle", worst_cycle);
    summary.metric("node_max_over_peak", node_max / peak_max);
    summary.metric("circulation_slope", circ.slope);
    summary.metric("circulation_r_squared", circ.r_squared);
    summary.metric("circulation_sign", circ.circulation_sign as f64);
    summary.metric("omega_over_bounce", omega_ratio);
    if let Some(w) = circ.warning {
        summary.warn(w);
    }

    let t1 = write_table(
        &cfg.out_dir,
        "agreement",
        &["t", "theta", "r", "exact", "factored"],
        &rows,
        cfg.format,
    )?;
    let t2 = write_table(
        &cfg.out_dir,
        "node_line",
        &["t", "r", "node_theta", "node_height", "crest_height"],
        &node_rows,
        cfg.format,
    )?;
    let t3 = write_table(
        &cfg.out_dir,
        "circulation",
        &["r", "kr", "transport"],
        &circ_rows,
        cfg.format,
    )?;
    finalize_run(&cfg.out_dir, summary, vec![t1, t2, t3])
}
