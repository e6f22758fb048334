//! Net torque one antiphase droplet pair exerts on another, from the four
//! droplet-droplet flow forces, as the second pair tilts out of parallel
//! alignment. Also tabulates the orbit-speed scaling of the pair coupling
//! and spot-checks the exchange antisymmetry of the combined field.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forces::{droplet_pair_force, Oscillator};
use crate::harness::config::ScenarioConfig;
use crate::harness::output::{finalize_run, write_table, RunReport, RunSummary};
use crate::spin::{antisymmetric_pair_field, pair_boundary_coupling, superposed_field, SpinState};

/// z component of the 2D cross product.
fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    let m = &cfg.medium;
    let sep = cfg.f64("torque", "droplet_separation", 4.0)?;
    let dist = cfg.f64("torque", "pair_distance", 20.0)?;
    let q = cfg.f64("torque", "flow_rate", 1.0)?;
    let angles = cfg.f64_list(
        "torque",
        "angles_deg",
        &[-90.0, -60.0, -30.0, -15.0, -5.0, 0.0, 5.0, 15.0, 30.0, 60.0, 90.0],
    )?;
    if !(sep > 0.0) || !(dist > sep) {
        return Err(Error::Config(format!(
            "need 0 < droplet_separation < pair_distance; got {sep}, {dist}"
        )));
    }

    // Pair A stands on the y axis at the origin; pair B is centered at
    // (dist, 0) and tilted by chi from parallel. Each pair bounces in
    // antiphase internally (phases 0 and pi).
    let torque_at = |chi: f64| -> Result<f64> {
        let a_droplets = [
            ([0.0, 0.5 * sep], 0.0),
            ([0.0, -0.5 * sep], std::f64::consts::PI),
        ];
        let axis = [-chi.sin(), chi.cos()];
        let center = [dist, 0.0];
        let b_droplets = [
            (
                [
                    center[0] + 0.5 * sep * axis[0],
                    center[1] + 0.5 * sep * axis[1],
                ],
                0.0,
            ),
            (
                [
                    center[0] - 0.5 * sep * axis[0],
                    center[1] - 0.5 * sep * axis[1],
                ],
                std::f64::consts::PI,
            ),
        ];
        let mut torque = 0.0;
        for (pa, phase_a) in a_droplets {
            for (pb, phase_b) in b_droplets {
                let osc_a = Oscillator::new(pa, q, phase_a, m.omega0)?;
                let osc_b = Oscillator::new(pb, q, phase_b, m.omega0)?;
                let dx = [pb[0] - pa[0], pb[1] - pa[1]];
                let r = dx[0].hypot(dx[1]);
                // positive force = attraction: it pulls b toward a
                let f = droplet_pair_force(&osc_a, &osc_b, m.rho0, r)?;
                let force_on_b = [-f * dx[0] / r, -f * dx[1] / r];
                let lever = [pb[0] - center[0], pb[1] - center[1]];
                torque += cross(lever, force_on_b);
            }
        }
        Ok(torque)
    };

    let mut rows = Vec::with_capacity(angles.len());
    for &deg in &angles {
        rows.push(vec![deg, torque_at(deg.to_radians())?]);
    }
    let probe = 5.0_f64.to_radians();
    let t_plus = torque_at(probe)?;
    let t_minus = torque_at(-probe)?;
    let t_zero = torque_at(0.0)?;
    // restoring means the torque opposes the tilt on both sides
    let restoring = t_plus < 0.0 && t_minus > 0.0;

    // Orbit-speed scaling of the boundary-mediated coupling.
    let alpha1 = 0.3;
    let coupling_rows: Vec<Vec<f64>> = [0.1, 0.25, 0.5]
        .iter()
        .map(|&frac| {
            let alpha2 = pair_boundary_coupling(frac * m.c, alpha1, m)?;
            Ok(vec![frac, alpha1, alpha2, alpha2 / alpha1])
        })
        .collect::<Result<_>>()?;

    // Exchange spot-check: swapping which center hosts which droplet
    // negates the antisymmetric pair field at every sample point.
    let state = SpinState::from_alpha(0.3);
    let xi_a = |p: (f64, f64), t: f64| -> Complex64 {
        let r = p.0.hypot(p.1);
        let theta = p.1.atan2(p.0);
        superposed_field(&state, r, theta, t, m)
            .map(|(xi, _)| xi)
            .expect("hypot radius is nonnegative")
    };
    let d = (dist, 0.0);
    let swapped = |p: (f64, f64), t: f64| xi_a((p.0 - d.0, p.1 - d.1), t);
    let mut exchange_residual = 0.0_f64;
    let mut field_scale = 0.0_f64;
    for &(x, y) in &[(3.0, 1.0), (8.0, -2.0), (14.0, 4.0), (25.0, 0.5)] {
        let at = ((x, y), 0.013);
        let direct = antisymmetric_pair_field(xi_a, d, at);
        let exchanged = antisymmetric_pair_field(swapped, (-d.0, -d.1), at);
        exchange_residual = exchange_residual.max((direct + exchanged).norm());
        field_scale = field_scale.max(direct.norm());
    }

    let mut summary = RunSummary::new(cfg.scenario.name(), cfg.seed);
    summary.metric("torque_at_plus_5deg", t_plus);
    summary.metric("torque_at_minus_5deg", t_minus);
    summary.metric("torque_at_zero", t_zero);
    summary.metric("parallel_is_restoring", if restoring { 1.0 } else { 0.0 });
    summary.metric("coupling_quarter_c", pair_boundary_coupling(0.25 * m.c, alpha1, m)?);
    summary.metric("exchange_residual", exchange_residual);
    summary.metric("field_scale", field_scale);

    let t1 = write_table(
        &cfg.out_dir,
        "torque",
        &["chi_deg", "torque"],
        &rows,
        cfg.format,
    )?;
    let t2 = write_table(
        &cfg.out_dir,
        "coupling",
        &["v_over_c", "alpha1", "alpha2", "ratio"],
        &coupling_rows,
        cfg.format,
    )?;
    finalize_run(&cfg.out_dir, summary, vec![t1, t2])
}
