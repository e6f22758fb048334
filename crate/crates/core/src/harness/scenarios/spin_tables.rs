//! Pure-algebra tables for the two-mode state: angular momentum against
//! the mixing angle, axis projections for the cardinal states, and the
//! double covering traced by carrying the tilt parameter through 4 pi.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::Result;
use crate::harness::config::ScenarioConfig;
use crate::harness::output::{finalize_run, write_table, RunReport, RunSummary};
use crate::spin::{angular_momentum, energy_proxy, spin_vector, SpinState};

pub(super) fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    let l0 = 1.0;

    // Mixing-angle table. The closed form is L/L0 = cos(2 alpha) and the
    // two-mode power is constant.
    let n_alpha = 16usize;
    let mut alpha_rows = Vec::with_capacity(n_alpha + 1);
    let mut l_dev = 0.0_f64;
    let mut e_dev = 0.0_f64;
    for i in 0..=n_alpha {
        let alpha = i as f64 * PI / n_alpha as f64;
        let state = SpinState::from_alpha(alpha);
        let l = angular_momentum(&state, l0)?;
        let e = energy_proxy(&state);
        l_dev = l_dev.max((l - (2.0 * alpha).cos()).abs());
        e_dev = e_dev.max((e - 1.0).abs());
        alpha_rows.push(vec![alpha, l, e]);
    }

    // Cardinal states and their axis projections.
    let inv = 1.0 / 2.0_f64.sqrt();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let cases: Vec<(SpinState, (f64, f64, f64))> = vec![
        (SpinState::new(c(1.0, 0.0), c(0.0, 0.0))?, (0.0, 0.0, 1.0)),
        (SpinState::new(c(0.0, 0.0), c(1.0, 0.0))?, (0.0, 0.0, -1.0)),
        (SpinState::new(c(inv, 0.0), c(inv, 0.0))?, (1.0, 0.0, 0.0)),
        (SpinState::new(c(inv, 0.0), c(-inv, 0.0))?, (-1.0, 0.0, 0.0)),
        (SpinState::new(c(inv, 0.0), c(0.0, inv))?, (0.0, 1.0, 0.0)),
        // the same ray written with a global phase: (-i, 1)/sqrt(2)
        (SpinState::new(c(0.0, -inv), c(inv, 0.0))?, (0.0, 1.0, 0.0)),
        (SpinState::new(c(inv, 0.0), c(0.0, -inv))?, (0.0, -1.0, 0.0)),
        (SpinState::from_bloch(0.0, FRAC_PI_2, FRAC_PI_2), (0.0, 1.0, 0.0)),
    ];
    let mut axis_rows = Vec::with_capacity(cases.len());
    let mut axis_dev = 0.0_f64;
    for (i, (state, expect)) in cases.iter().enumerate() {
        let (sx, sy, sz) = spin_vector(state)?;
        axis_dev = axis_dev
            .max((sx - expect.0).abs())
            .max((sy - expect.1).abs())
            .max((sz - expect.2).abs());
        axis_rows.push(vec![i as f64, sx, sy, sz, expect.0, expect.1, expect.2]);
    }

    // Double covering: carry beta from 0 to 4 pi with everything else
    // fixed. Projections close after 2 pi; the amplitudes need 4 pi.
    let n_beta = 32usize;
    let mut covering_rows = Vec::with_capacity(n_beta + 1);
    for i in 0..=n_beta {
        let beta = i as f64 * 4.0 * PI / n_beta as f64;
        let state = SpinState::from_bloch(0.0, beta, 0.0);
        let (sx, sy, sz) = spin_vector(&state)?;
        covering_rows.push(vec![beta, state.a1.re, state.a1.im, sx, sy, sz]);
    }
    let at = |beta: f64| SpinState::from_bloch(0.0, beta, 0.0);
    let amp_at_2pi = at(2.0 * PI).a1.re;
    let sz_return = (spin_vector(&at(2.0 * PI))?.2 - spin_vector(&at(0.0))?.2).abs();
    let identity_dev = (at(4.0 * PI).a1 - at(0.0).a1).norm();

    let mut summary = RunSummary::new(cfg.scenario.name(), cfg.seed);
    summary.metric("l_table_max_dev", l_dev);
    summary.metric("energy_max_dev", e_dev);
    summary.metric("axis_max_dev", axis_dev);
    summary.metric("covering_amp_at_2pi", amp_at_2pi);
    summary.metric("covering_sz_return_dev", sz_return);
    summary.metric("covering_identity_dev", identity_dev);

    let t1 = write_table(
        &cfg.out_dir,
        "angular_momentum",
        &["alpha", "l_over_l0", "power"],
        &alpha_rows,
        cfg.format,
    )?;
    let t2 = write_table(
        &cfg.out_dir,
        "axis_projections",
        &["case", "sx", "sy", "sz", "expect_x", "expect_y", "expect_z"],
        &axis_rows,
        cfg.format,
    )?;
    let t3 = write_table(
        &cfg.out_dir,
        "covering",
        &["beta", "a1_re", "a1_im", "sx", "sy", "sz"],
        &covering_rows,
        cfg.format,
    )?;
    finalize_run(&cfg.out_dir, summary, vec![t1, t2, t3])
}
