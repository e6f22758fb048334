//! Send droplets one at a time through a slit plate and histogram their
//! exit bearings. Each droplet rides the steady diffracted field built
//! once from the aperture, so the interference pattern emerges from
//! single-particle statistics. The analytic far-field minimum is computed
//! alongside for comparison.

use rand::Rng;

use crate::error::{Error, Result};
use crate::harness::config::ScenarioConfig;
use crate::harness::output::{finalize_run, write_table, RunReport, RunSummary};
use crate::harness::rng::trajectory_rng;
use crate::harness::stats::{first_local_min_bin, histogram};
use crate::quantum::analysis::BohmSampler;
use crate::quantum::diffract::{
    diffracted_field, double_slit_first_minimum, far_field_intensity, single_slit_first_minimum,
    streamline_exit_angle, GuidanceConfig, SlitApparatus, SlitKind,
};
use crate::quantum::pilot::PilotWaveParams;

pub(super) fn run(cfg: &ScenarioConfig, kind: SlitKind) -> Result<RunReport> {
    let m = &cfg.medium;
    let wavelength = cfg.f64("slit", "wavelength", 7.3)?;
    let default_width = match kind {
        SlitKind::Single => 14.8,
        SlitKind::Double => 7.0,
    };
    let width = cfg.f64("slit", "width", default_width)?;
    let separation = cfg.f64("slit", "separation", 14.3)?;
    let droplets = cfg.usize("slit", "droplets", 10_000)?;
    let memory = cfg.f64("slit", "memory", 2.0)?;
    let step = cfg.f64("slit", "step", 0.35)?;
    let exit_radius = cfg.f64("slit", "exit_radius", 200.0)?;
    let bin_width = cfg.f64("slit", "bin_width", 5.0)?;
    let ny = cfg.usize("slit", "grid_ny", 2048)?;
    let dy = cfg.f64("slit", "grid_dy", 0.25)?;
    let nx = cfg.usize("slit", "grid_nx", 600)?;
    let dx = cfg.f64("slit", "grid_dx", 0.35)?;
    let max_steps = cfg.usize("slit", "max_steps", 20_000)?;
    if !(wavelength > 0.0) {
        return Err(Error::Domain(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    if !(bin_width > 0.0) || 180.0 % bin_width != 0.0 {
        return Err(Error::Config(format!(
            "bin_width {bin_width} must divide 180 degrees evenly"
        )));
    }
    if droplets == 0 {
        return Err(Error::Config("need at least one droplet".into()));
    }

    let apparatus = SlitApparatus {
        kind,
        width,
        separation,
    };
    apparatus.validate()?;
    let analytic = match kind {
        SlitKind::Single => single_slit_first_minimum(wavelength, width)?,
        SlitKind::Double => double_slit_first_minimum(wavelength, separation)?,
    };
    let Some(analytic_deg) = analytic.degrees() else {
        return Err(Error::Regime(format!(
            "no diffraction minimum exists for wavelength {wavelength} with this plate"
        )));
    };

    let k = std::f64::consts::TAU / wavelength;
    let field = diffracted_field(&apparatus, k, ny, dy, nx, dx)?;
    // Only the phase-gradient direction guides droplets, so any valid
    // parameter set works here; take the bath's.
    let pw = PilotWaveParams::new(1.0, m.omega0, m.c)?;
    let sampler = BohmSampler::new(&field, &pw);
    let guidance = GuidanceConfig {
        step,
        memory,
        exit_radius,
        max_steps,
    };

    let start_x = field.x_of(0);
    let mut angles = Vec::with_capacity(droplets);
    let mut failures = 0usize;
    for i in 0..droplets {
        let u: f64 = trajectory_rng(cfg.seed, i as u64).random();
        let y0 = apparatus.entry_point(u);
        match streamline_exit_angle(&field, &sampler, (start_x, y0), &guidance) {
            Ok(angle) => angles.push(angle),
            // A droplet that leaves the grid or stalls is tallied, not fatal;
            // the count lands in the summary.
            Err(_) => failures += 1,
        }
    }
    if angles.len() < droplets / 2 {
        return Err(Error::Numeric(format!(
            "{failures} of {droplets} droplets failed to cross the field"
        )));
    }

    let n_bins = (180.0 / bin_width).round() as usize;
    let edges: Vec<f64> = (0..=n_bins).map(|i| -90.0 + i as f64 * bin_width).collect();
    let hist = histogram(&angles, &edges)?;

    // Scan rightward from the tallest bin (the forward beam) for the first
    // count valley; that is the Monte Carlo minimum.
    let peak = hist
        .counts
        .iter()
        .enumerate()
        .max_by_key(|(_, &c)| c)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let min_bin = first_local_min_bin(&hist.counts, peak);

    let mut summary = RunSummary::new(cfg.scenario.name(), cfg.seed);
    summary.metric("analytic_first_min_deg", analytic_deg);
    summary.metric("wavelength", wavelength);
    summary.metric("bin_width_deg", bin_width);
    summary.metric("droplets", droplets as f64);
    summary.metric("finished", angles.len() as f64);
    summary.metric("failed", failures as f64);
    summary.metric("out_of_range", (hist.below + hist.above) as f64);
    match min_bin {
        Some(i) => {
            let (lo, hi) = hist.bin_span(i);
            summary.metric("mc_min_bin_left_deg", lo);
            summary.metric("mc_min_bin_right_deg", hi);
            summary.metric("mc_min_bin_count", hist.counts[i] as f64);
        }
        None => summary.warn("histogram has no interior minimum"),
    }
    if failures > 0 {
        summary.warn(format!("{failures} droplets did not reach the exit radius"));
    }

    let hist_rows: Vec<Vec<f64>> = hist
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let (lo, hi) = hist.bin_span(i);
            vec![lo, hi, c as f64]
        })
        .collect();
    let t1 = write_table(
        &cfg.out_dir,
        "histogram",
        &["bin_left_deg", "bin_right_deg", "count"],
        &hist_rows,
        cfg.format,
    )?;

    let thetas: Vec<f64> = (0..180).map(|i| -89.5 + i as f64).collect();
    let intensities = far_field_intensity(kind, wavelength, width, separation, &thetas)?;
    let intensity_rows: Vec<Vec<f64>> = thetas
        .iter()
        .zip(&intensities)
        .map(|(&theta, &intensity)| vec![theta, intensity])
        .collect();
    let t2 = write_table(
        &cfg.out_dir,
        "intensity",
        &["theta_deg", "intensity"],
        &intensity_rows,
        cfg.format,
    )?;

    finalize_run(&cfg.out_dir, summary, vec![t1, t2])
}
