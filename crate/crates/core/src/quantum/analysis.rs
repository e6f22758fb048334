use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::quantum::field::{Boundary, ComplexField};
use crate::quantum::pilot::PilotWaveParams;
use crate::quantum::stepper::SchrodingerStepper;

/// Branch-cut-safe phase difference between two samples: the argument of
/// b * conj(a) is the increment of arg from a to b folded into (-pi, pi].
#[inline]
fn phase_increment(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

fn phase_gradient_x(field: &ComplexField, ix: usize, iy: usize) -> f64 {
    let n = field.nx;
    match field.boundary {
        Boundary::Periodic => {
            let prev = field.at((ix + n - 1) % n, iy);
            let next = field.at((ix + 1) % n, iy);
            phase_increment(prev, next) / (2.0 * field.dx)
        }
        _ => {
            if ix == 0 {
                phase_increment(field.at(0, iy), field.at(1, iy)) / field.dx
            } else if ix == n - 1 {
                phase_increment(field.at(n - 2, iy), field.at(n - 1, iy)) / field.dx
            } else {
                phase_increment(field.at(ix - 1, iy), field.at(ix + 1, iy)) / (2.0 * field.dx)
            }
        }
    }
}

fn phase_gradient_y(field: &ComplexField, ix: usize, iy: usize) -> f64 {
    let n = field.ny;
    if n == 1 {
        return 0.0;
    }
    match field.boundary {
        Boundary::Periodic => {
            let prev = field.at(ix, (iy + n - 1) % n);
            let next = field.at(ix, (iy + 1) % n);
            phase_increment(prev, next) / (2.0 * field.dy)
        }
        _ => {
            if iy == 0 {
                phase_increment(field.at(ix, 0), field.at(ix, 1)) / field.dy
            } else if iy == n - 1 {
                phase_increment(field.at(ix, n - 2), field.at(ix, n - 1)) / field.dy
            } else {
                phase_increment(field.at(ix, iy - 1), field.at(ix, iy + 1)) / (2.0 * field.dy)
            }
        }
    }
}

fn node_error(x: f64, y: f64) -> Error {
    Error::Numeric(format!("node at ({x}, {y}): phase undefined where the field vanishes"))
}

/// Guidance velocity v = (c^2/omega0) grad(arg psi) = (bbar/m0) grad(theta),
/// evaluated at the grid point nearest to `at`. The phase has no meaning
/// where the field vanishes; points within eps = 1e-8 max|psi| of a node
/// report a node error (recognizable via [`Error::is_node`]).
pub fn bohm_velocity(field: &ComplexField, at: (f64, f64), pw: &PilotWaveParams) -> Result<(f64, f64)> {
    let sampler = BohmSampler::new(field, pw);
    sampler.velocity(field, at)
}

/// Precomputed guidance-velocity evaluator: fixes the node threshold from
/// one max scan so per-point queries stay O(1).
pub struct BohmSampler {
    eps: f64,
    vel_scale: f64,
}

impl BohmSampler {
    pub fn new(field: &ComplexField, pw: &PilotWaveParams) -> Self {
        Self { eps: 1e-8 * field.max_abs(), vel_scale: pw.bbar / pw.m0 }
    }

    fn nearest_index(field: &ComplexField, at: (f64, f64)) -> Result<(usize, usize)> {
        let fx = (at.0 - field.origin.0) / field.dx;
        let fy = if field.ny == 1 { 0.0 } else { (at.1 - field.origin.1) / field.dy };
        let ix = fx.round();
        let iy = fy.round();
        if ix < -0.5 || ix > field.nx as f64 - 0.5 || iy < -0.5 || iy > field.ny as f64 - 0.5 {
            return Err(Error::Domain(format!(
                "point ({}, {}) lies outside the sampled grid",
                at.0, at.1
            )));
        }
        Ok((
            (ix.max(0.0) as usize).min(field.nx - 1),
            (iy.max(0.0) as usize).min(field.ny - 1),
        ))
    }

    pub fn velocity(&self, field: &ComplexField, at: (f64, f64)) -> Result<(f64, f64)> {
        let (ix, iy) = Self::nearest_index(field, at)?;
        if field.at(ix, iy).norm() <= self.eps {
            return Err(node_error(at.0, at.1));
        }
        Ok((
            self.vel_scale * phase_gradient_x(field, ix, iy),
            self.vel_scale * phase_gradient_y(field, ix, iy),
        ))
    }
}

/// Second-order residual of the relativistic carrier-wave equation
/// psi_tt - c^2 Lap(psi) + omega0^2 psi, RMS of the complex magnitude over
/// interior points. `prev`, `curr`, `next` are consecutive time levels.
pub fn klein_gordon_residual(
    prev: &ComplexField,
    curr: &ComplexField,
    next: &ComplexField,
    dt: f64,
    pw: &PilotWaveParams,
) -> Result<f64> {
    if prev.nx != curr.nx || curr.nx != next.nx || prev.ny != curr.ny || curr.ny != next.ny {
        return Err(Error::Config("time levels live on different grids".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let (nx, ny) = (curr.nx, curr.ny);
    if nx < 3 || (ny != 1 && ny < 3) {
        return Err(Error::Config(format!("grid {nx}x{ny} has no interior")));
    }
    let c2 = pw.c * pw.c;
    let w2 = pw.omega0 * pw.omega0;
    let mut sum = 0.0;
    let mut count = 0usize;
    let y_range = if ny == 1 { 0..1 } else { 1..ny - 1 };
    for ix in 1..nx - 1 {
        for iy in y_range.clone() {
            let u = curr.at(ix, iy);
            let tt = (next.at(ix, iy) - u.scale(2.0) + prev.at(ix, iy)) / (dt * dt);
            let mut lap = (curr.at(ix + 1, iy) - u.scale(2.0) + curr.at(ix - 1, iy)) / (curr.dx * curr.dx);
            if ny > 1 {
                lap += (curr.at(ix, iy + 1) - u.scale(2.0) + curr.at(ix, iy - 1)) / (curr.dy * curr.dy);
            }
            sum += (tt - lap.scale(c2) + u.scale(w2)).norm_sqr();
            count += 1;
        }
    }
    Ok((sum / count as f64).sqrt())
}

/// Probability flux R^2 v in the Im(conj(psi) grad psi) form, which stays
/// finite through nodes where the velocity itself diverges.
fn flux_x(field: &ComplexField, ix: usize, pw: &PilotWaveParams) -> f64 {
    let grad = (field.at(ix + 1, 0) - field.at(ix - 1, 0)) / (2.0 * field.dx);
    pw.bbar / pw.m0 * (field.at(ix, 0).conj() * grad).im
}

/// RMS of d(R^2)/dt + div(R^2 v) over interior points, using two adjacent
/// time levels: the time derivative is centered at the midpoint and the
/// flux divergence is averaged across the pair. Second-order in dx and dt.
pub fn continuity_residual(a: &ComplexField, b: &ComplexField, dt: f64, pw: &PilotWaveParams) -> Result<f64> {
    if a.nx != b.nx || a.ny != b.ny {
        return Err(Error::Config("time levels live on different grids".into()));
    }
    if a.ny != 1 {
        return Err(Error::Config("continuity residual is computed on 1D fields".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let n = a.nx;
    if n < 5 {
        return Err(Error::Config(format!("grid of {n} samples has no interior")));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for ix in 2..n - 2 {
        let ddt = (b.at(ix, 0).norm_sqr() - a.at(ix, 0).norm_sqr()) / dt;
        let div_a = (flux_x(a, ix + 1, pw) - flux_x(a, ix - 1, pw)) / (2.0 * a.dx);
        let div_b = (flux_x(b, ix + 1, pw) - flux_x(b, ix - 1, pw)) / (2.0 * b.dx);
        let r = ddt + 0.5 * (div_a + div_b);
        sum += r * r;
        count += 1;
    }
    Ok((sum / count as f64).sqrt())
}

/// Size of the second time derivative relative to the first-order term that
/// the envelope evolution keeps: RMS(psi_tt) / (2 omega0 RMS(psi_t)). The
/// slow-envelope reduction assumes this is small; it is reported, never
/// subtracted.
pub fn dropped_term_ratio(prev: &ComplexField, curr: &ComplexField, next: &ComplexField, dt: f64, pw: &PilotWaveParams) -> Result<f64> {
    if prev.nx != curr.nx || curr.nx != next.nx || prev.ny != curr.ny || curr.ny != next.ny {
        return Err(Error::Config("time levels live on different grids".into()));
    }
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    let mut tt_sum = 0.0;
    let mut t_sum = 0.0;
    for i in 0..curr.data.len() {
        let tt = (next.data[i] - curr.data[i].scale(2.0) + prev.data[i]) / (dt * dt);
        let t1 = (next.data[i] - prev.data[i]) / (2.0 * dt);
        tt_sum += tt.norm_sqr();
        t_sum += t1.norm_sqr();
    }
    if t_sum == 0.0 {
        return Err(Error::Numeric("field is static; ratio undefined".into()));
    }
    Ok((tt_sum.sqrt()) / (2.0 * pw.omega0 * t_sum.sqrt()))
}

/// A guided-droplet path through an evolving field.
#[derive(Debug, Clone)]
pub struct BohmTrajectory {
    /// Recorded x positions, one per recorded step (mm).
    pub positions: Vec<f64>,
    /// Stream index used to draw the initial position.
    pub seed: u64,
    /// Initial sampling weight; inverse-CDF draws are equally weighted.
    pub weight: f64,
}

impl BohmTrajectory {
    pub fn current(&self) -> f64 {
        *self.positions.last().expect("trajectory always holds its start")
    }
}

/// Map uniform draws in [0, 1) through the inverse CDF of |psi|^2 on the
/// grid, with linear interpolation inside each cell.
pub fn sample_from_density(field: &ComplexField, uniforms: &[f64]) -> Result<Vec<f64>> {
    if field.ny != 1 {
        return Err(Error::Config("density sampling is 1D".into()));
    }
    let n = field.nx;
    let mut cdf = Vec::with_capacity(n + 1);
    cdf.push(0.0);
    let mut acc = 0.0;
    for ix in 0..n {
        acc += field.at(ix, 0).norm_sqr();
        cdf.push(acc);
    }
    if !(acc > 0.0) || !acc.is_finite() {
        return Err(Error::Numeric(format!("cannot sample a field with mass {acc}")));
    }
    let mut out = Vec::with_capacity(uniforms.len());
    for &u in uniforms {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::Domain(format!("uniform draw {u} outside [0, 1)")));
        }
        let target = u * acc;
        // First cell whose cumulative mass exceeds the target.
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if cdf[mid + 1] <= target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let cell_mass = cdf[lo + 1] - cdf[lo];
        let frac = if cell_mass > 0.0 { (target - cdf[lo]) / cell_mass } else { 0.5 };
        out.push(field.x_of(lo) + (frac - 0.5) * field.dx);
    }
    Ok(out)
}

/// Evolve an ensemble of guided droplets alongside the field. Initial
/// positions are drawn from |psi|^2 with one counter-mode stream per
/// trajectory, so ensembles are reproducible regardless of scheduling.
/// Trajectories advance by a trapezoidal two-stage step across each field
/// update; a droplet sitting on a node keeps its previous velocity for
/// that step.
pub fn evolve_bohm_ensemble(
    stepper: &mut impl SchrodingerStepper,
    field: &mut ComplexField,
    n_steps: usize,
    n_traj: usize,
    seed: u64,
    pw: &PilotWaveParams,
    record_every: usize,
) -> Result<Vec<BohmTrajectory>> {
    if n_traj == 0 || record_every == 0 {
        return Err(Error::Config("need at least one trajectory and a positive record interval".into()));
    }
    let uniforms: Vec<f64> = (0..n_traj)
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            rng.random::<f64>()
        })
        .collect();
    let starts = sample_from_density(field, &uniforms)?;
    let mut trajectories: Vec<BohmTrajectory> = starts
        .iter()
        .enumerate()
        .map(|(i, &x)| BohmTrajectory { positions: vec![x], seed: i as u64, weight: 1.0 })
        .collect();
    let mut xs: Vec<f64> = starts;
    let mut last_v: Vec<f64> = vec![0.0; n_traj];
    let dt = stepper.dt();
    let x_min = field.origin.0;
    let x_max = field.origin.0 + (field.nx - 1) as f64 * field.dx;
    let mut before = field.clone();
    for step in 1..=n_steps {
        before.data.copy_from_slice(&field.data);
        stepper.schrodinger_step(field)?;
        let sampler_a = BohmSampler::new(&before, pw);
        let sampler_b = BohmSampler::new(field, pw);
        for (i, x) in xs.iter_mut().enumerate() {
            let v1 = match sampler_a.velocity(&before, (*x, 0.0)) {
                Ok((vx, _)) => vx,
                Err(e) if e.is_node() => last_v[i],
                Err(e) => return Err(e),
            };
            let x_pred = (*x + v1 * dt).clamp(x_min, x_max);
            let v2 = match sampler_b.velocity(field, (x_pred, 0.0)) {
                Ok((vx, _)) => vx,
                Err(e) if e.is_node() => v1,
                Err(e) => return Err(e),
            };
            *x = (*x + 0.5 * dt * (v1 + v2)).clamp(x_min, x_max);
            last_v[i] = v2;
            if !x.is_finite() {
                return Err(Error::Numeric(format!("trajectory {i} left the finite range")));
            }
            if step % record_every == 0 {
                trajectories[i].positions.push(*x);
            }
        }
    }
    Ok(trajectories)
}

/// Sup distance between the empirical CDF of `positions` and the CDF of
/// |psi|^2 on the field's grid: the one-sample statistic used to decide
/// whether an ensemble still follows the field density.
pub fn ks_distance_to_density(positions: &[f64], field: &ComplexField) -> Result<f64> {
    if field.ny != 1 {
        return Err(Error::Config("density comparison is 1D".into()));
    }
    if positions.is_empty() {
        return Err(Error::Config("no positions to compare".into()));
    }
    let n = field.nx;
    let mut cdf = Vec::with_capacity(n + 1);
    cdf.push(0.0);
    let mut acc = 0.0;
    for ix in 0..n {
        acc += field.at(ix, 0).norm_sqr();
        cdf.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::Numeric("field carries no density".into()));
    }
    let mut sorted = positions.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("positions are finite"));
    let m = sorted.len() as f64;
    let field_cdf = |x: f64| -> f64 {
        // Cell ix covers [x_of(ix) - dx/2, x_of(ix) + dx/2).
        let f = (x - field.origin.0) / field.dx + 0.5;
        if f <= 0.0 {
            return 0.0;
        }
        if f >= n as f64 {
            return 1.0;
        }
        let ix = f.floor() as usize;
        let frac = f - ix as f64;
        (cdf[ix] + frac * (cdf[ix + 1] - cdf[ix])) / acc
    };
    let mut sup = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let fx = field_cdf(x);
        let lo = i as f64 / m;
        let hi = (i + 1) as f64 / m;
        sup = sup.max((fx - lo).abs()).max((hi - fx).abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pw() -> PilotWaveParams {
        PilotWaveParams::new(1.0, std::f64::consts::TAU * 25.0, 11.95).unwrap()
    }

    #[test]
    fn plane_wave_velocity_uniform() {
        let p = pw();
        let n = 64;
        let dx = 0.25;
        let k = 3.0 * std::f64::consts::TAU / (n as f64 * dx);
        let mut f = ComplexField::line(n, dx, 0.0).unwrap();
        f.fill_line(|x| Complex64::from_polar(1.0, k * x));
        let expect = p.bbar / p.m0 * k;
        for at in [0.0, 3.1, 12.7, 15.7] {
            let (vx, vy) = bohm_velocity(&f, (at, 0.0), &p).unwrap();
            assert_relative_eq!(vx, expect, max_relative = 1e-10);
            assert_eq!(vy, 0.0);
        }
    }

    #[test]
    fn real_field_is_still() {
        let p = pw();
        let mut f = ComplexField::line(32, 0.5, -8.0).unwrap();
        f.fill_line(|x| Complex64::new((-x * x / 9.0).exp() + 0.2, 0.0));
        for at in [-7.0, 0.0, 5.5] {
            let (vx, _) = bohm_velocity(&f, (at, 0.0), &p).unwrap();
            assert_relative_eq!(vx, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn node_is_reported() {
        let p = pw();
        let mut f = ComplexField::line(33, 0.5, -8.0).unwrap();
        // odd sine node exactly on the center sample
        f.fill_line(|x| Complex64::new(x / 8.0, 0.0));
        let err = bohm_velocity(&f, (0.0, 0.0), &p).unwrap_err();
        assert!(err.is_node());
        assert!(bohm_velocity(&f, (1e9, 0.0), &p).is_err());
    }

    #[test]
    fn phase_unwrap_survives_branch_cut() {
        let p = pw();
        let n = 64;
        let dx = 0.25;
        // large k: naive arg differences would alias near +-pi
        let k = 11.0 * std::f64::consts::TAU / (n as f64 * dx);
        let mut f = ComplexField::line(n, dx, 0.0).unwrap();
        f.fill_line(|x| Complex64::from_polar(1.0, k * x));
        let (vx, _) = bohm_velocity(&f, (8.0, 0.0), &p).unwrap();
        assert_relative_eq!(vx, p.bbar / p.m0 * k, max_relative = 1e-10);
    }

    #[test]
    fn stationary_state_satisfies_continuity() {
        let p = pw();
        let n = 64;
        let dx = 0.25;
        let mut a = ComplexField::line(n, dx, 0.0).unwrap();
        a.fill_line(|x| Complex64::new((-(x - 8.0) * (x - 8.0) / 4.0).exp(), 0.0));
        // advance by a global phase only: same R^2, v = 0
        let mut b = a.clone();
        let rot = Complex64::from_polar(1.0, -0.03);
        for z in &mut b.data {
            *z *= rot;
        }
        let r = continuity_residual(&a, &b, 1e-3, &p).unwrap();
        assert!(r < 1e-12, "residual {r} should sit at rounding noise");
    }

    #[test]
    fn sampling_matches_density() {
        let mut f = ComplexField::line(128, 0.25, -16.0).unwrap();
        f.fill_line(|x| Complex64::new((-x * x / 18.0).exp(), 0.0));
        let uniforms: Vec<f64> = (0..4096).map(|i| (i as f64 + 0.5) / 4096.0).collect();
        let xs = sample_from_density(&f, &uniforms).unwrap();
        let d = ks_distance_to_density(&xs, &f).unwrap();
        // stratified uniforms: distance limited only by grid interpolation
        assert!(d < 0.01, "ks distance {d} too large");
        let mean: f64 = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.05, "mean {mean} should be near 0");
    }

    #[test]
    fn sampling_rejects_bad_input() {
        let f = ComplexField::line(16, 0.25, 0.0).unwrap();
        assert!(sample_from_density(&f, &[0.5]).is_err()); // zero field
        let mut g = ComplexField::line(16, 0.25, 0.0).unwrap();
        g.fill_line(|_| Complex64::new(1.0, 0.0));
        assert!(sample_from_density(&g, &[1.5]).is_err());
    }

    #[test]
    fn ks_detects_displaced_ensemble() {
        let mut f = ComplexField::line(128, 0.25, -16.0).unwrap();
        f.fill_line(|x| Complex64::new((-x * x / 8.0).exp(), 0.0));
        let uniforms: Vec<f64> = (0..2048).map(|i| (i as f64 + 0.5) / 2048.0).collect();
        let mut xs = sample_from_density(&f, &uniforms).unwrap();
        for x in &mut xs {
            *x += 1.5;
        }
        let d = ks_distance_to_density(&xs, &f).unwrap();
        assert!(d > 0.2, "displaced ensemble should be flagged, got {d}");
    }

    #[test]
    fn dropped_term_ratio_for_slow_envelope() {
        let p = pw();
        let n = 32;
        let dx = 0.5;
        // envelope rotating at rate w much slower than omega0
        let w = 0.01 * p.omega0;
        let dt = 1e-4;
        let make = |t: f64| {
            let mut f = ComplexField::line(n, dx, 0.0).unwrap();
            f.fill_line(|x| Complex64::from_polar((-x * x / 50.0).exp(), -w * t + 0.01 * x));
            f
        };
        let r = dropped_term_ratio(&make(0.0), &make(dt), &make(2.0 * dt), dt, &p).unwrap();
        // psi_tt/psi_t = w, so ratio = w / (2 omega0) = 0.005
        assert_relative_eq!(r, w / (2.0 * p.omega0), max_relative = 1e-3);
    }
}
