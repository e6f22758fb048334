use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::field::ComplexField;
use crate::quantum::pilot::PilotWaveParams;
use crate::quantum::stepper::{SchrodingerStepper, SplitOperator1D};

/// Plane-wave transmission through a rectangular barrier of height `v0`
/// and the given width, exact in all three energy regimes. Serves as the
/// independent check on packet-evolution tunnelling runs.
pub fn rectangular_barrier_transmission(energy: f64, v0: f64, width: f64, pw: &PilotWaveParams) -> Result<f64> {
    if !(energy > 0.0) || !(v0 > 0.0) || !(width >= 0.0) || !width.is_finite() {
        return Err(Error::Domain(format!(
            "need energy > 0, barrier height > 0, width >= 0; got {energy}, {v0}, {width}"
        )));
    }
    if width == 0.0 {
        return Ok(1.0);
    }
    let two_m = 2.0 * pw.m0;
    let gap = v0 - energy;
    // Near-degenerate energies take the analytic E = V0 limit; both wings
    // approach it smoothly.
    if gap.abs() <= 1e-12 * v0 {
        let t_inv = 1.0 + pw.m0 * v0 * width * width / (2.0 * pw.bbar * pw.bbar);
        return Ok(1.0 / t_inv);
    }
    let t_inv = if gap > 0.0 {
        let kappa = (two_m * gap).sqrt() / pw.bbar;
        let s = (kappa * width).sinh();
        1.0 + v0 * v0 * s * s / (4.0 * energy * gap)
    } else {
        let k2 = (two_m * -gap).sqrt() / pw.bbar;
        let s = (k2 * width).sin();
        1.0 + v0 * v0 * s * s / (4.0 * energy * -gap)
    };
    Ok(1.0 / t_inv)
}

/// Incident droplet wave: a normalized Gaussian envelope with carrier k0.
#[derive(Debug, Clone, Copy)]
pub struct GaussianPacket {
    /// Envelope center (mm).
    pub x0: f64,
    /// Position standard deviation (mm).
    pub sigma: f64,
    /// Carrier wavenumber (1/mm).
    pub k0: f64,
}

impl GaussianPacket {
    /// Kinetic energy of the carrier mode, the scale the barrier height is
    /// compared against.
    pub fn carrier_energy(&self, pw: &PilotWaveParams) -> f64 {
        pw.bbar * pw.bbar * self.k0 * self.k0 / (2.0 * pw.m0)
    }

    /// Sample onto a line grid and normalize.
    pub fn realize(&self, n: usize, dx: f64, grid_x0: f64) -> Result<ComplexField> {
        if !(self.sigma > 0.0) {
            return Err(Error::Config(format!("packet sigma must be positive, got {}", self.sigma)));
        }
        let mut f = ComplexField::line(n, dx, grid_x0)?;
        let (x0, sigma, k0) = (self.x0, self.sigma, self.k0);
        f.fill_line(|x| {
            let d = x - x0;
            Complex64::from_polar((-d * d / (4.0 * sigma * sigma)).exp(), k0 * x)
        });
        f.normalize()?;
        Ok(f)
    }
}

/// Grid and schedule for one barrier-crossing evolution.
#[derive(Debug, Clone, Copy)]
pub struct TunnelRunConfig {
    pub n: usize,
    pub dx: f64,
    /// Coordinate of grid sample 0 (mm).
    pub grid_x0: f64,
    pub dt: f64,
    pub t_final: f64,
    /// Transmitted probability is integrated over x > width + margin.
    pub measure_margin: f64,
}

impl TunnelRunConfig {
    fn validate(&self) -> Result<()> {
        if self.n < 16 || !(self.dx > 0.0) || !(self.dt > 0.0) || !(self.t_final > 0.0) || !(self.measure_margin >= 0.0) {
            return Err(Error::Config(format!("invalid run configuration {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnellingRow {
    pub width: f64,
    pub transmitted: f64,
}

#[derive(Debug, Clone)]
pub struct TunnellingTable {
    /// Rows sorted by width.
    pub rows: Vec<TunnellingRow>,
    /// True when the carrier energy sits at or above the barrier top: the
    /// run crossed classically instead of tunnelling. A regime note, not
    /// an error.
    pub over_barrier: bool,
    pub carrier_energy: f64,
}

/// Barrier potential on the grid: height `v0` over [0, width), sampled by
/// cell overlap so widths between grid lines still move the answer.
pub fn barrier_potential(n: usize, dx: f64, grid_x0: f64, v0: f64, width: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let x = grid_x0 + i as f64 * dx;
            let lo = (x - 0.5 * dx).max(0.0);
            let hi = (x + 0.5 * dx).min(width);
            if hi > lo { v0 * (hi - lo) / dx } else { 0.0 }
        })
        .collect()
}

/// Send the packet at a rectangular barrier once per width and tabulate the
/// probability that ends up past it. Rows come back sorted by width.
pub fn tunnelling_sweep(
    widths: &[f64],
    v0: f64,
    packet: &GaussianPacket,
    run: &TunnelRunConfig,
    pw: &PilotWaveParams,
) -> Result<TunnellingTable> {
    run.validate()?;
    if widths.is_empty() {
        return Err(Error::Config("no barrier widths given".into()));
    }
    if !(v0 > 0.0) {
        return Err(Error::Domain(format!("barrier height must be positive, got {v0}")));
    }
    for &w in widths {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::Domain(format!("barrier width {w} must be finite and nonnegative")));
        }
    }
    let energy = packet.carrier_energy(pw);
    let n_steps = (run.t_final / run.dt).round() as usize;
    let mut sorted_widths = widths.to_vec();
    sorted_widths.sort_by(|a, b| a.partial_cmp(b).expect("widths are finite"));
    let mut rows = Vec::with_capacity(sorted_widths.len());
    for &w in &sorted_widths {
        let potential = barrier_potential(run.n, run.dx, run.grid_x0, v0, w);
        let mut stepper = SplitOperator1D::new(&potential, run.dx, run.dt, pw)?;
        let mut field = packet.realize(run.n, run.dx, run.grid_x0)?;
        for _ in 0..n_steps {
            stepper.schrodinger_step(&mut field)?;
        }
        let cut = w + run.measure_margin;
        let transmitted: f64 = (0..field.nx)
            .filter(|&ix| field.x_of(ix) > cut)
            .map(|ix| field.at(ix, 0).norm_sqr())
            .sum::<f64>()
            * field.dx;
        rows.push(TunnellingRow { width: w, transmitted });
    }
    Ok(TunnellingTable { rows, over_barrier: energy >= v0, carrier_energy: energy })
}
