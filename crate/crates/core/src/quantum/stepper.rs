use std::sync::Arc;

use num_complex::Complex64;
use rustfft::Fft;

use crate::error::{Error, Result};
use crate::quantum::field::{Boundary, ComplexField};
use crate::quantum::pilot::PilotWaveParams;

/// One-timestep propagator for i bbar d(psi)/dt = (-bbar^2/(2 m0) Lap + V) psi.
pub trait SchrodingerStepper {
    /// Advance the field in place by one `dt`.
    fn schrodinger_step(&mut self, field: &mut ComplexField) -> Result<()>;
    fn dt(&self) -> f64;
}

/// Advance a field by `n_steps`.
pub fn evolve(stepper: &mut impl SchrodingerStepper, field: &mut ComplexField, n_steps: usize) -> Result<()> {
    for _ in 0..n_steps {
        stepper.schrodinger_step(field)?;
    }
    Ok(())
}

fn check_line_grid(potential_len: usize, dx: f64, dt: f64) -> Result<()> {
    if potential_len < 4 {
        return Err(Error::Config(format!("grid of {potential_len} samples is too small")));
    }
    if !(dx > 0.0) || !(dt > 0.0) {
        return Err(Error::Config(format!("dx and dt must be positive, got dx={dx}, dt={dt}")));
    }
    Ok(())
}

/// Strang-split spectral stepper on a periodic 1D grid. Exactly unitary
/// (each factor is a pure phase), second-order accurate in dt.
pub struct SplitOperator1D {
    n: usize,
    dt: f64,
    exp_v_half: Vec<Complex64>,
    /// Kinetic phases with the 1/n inverse-FFT normalization folded in.
    exp_k: Vec<Complex64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl SplitOperator1D {
    /// `potential` is sampled on the same grid the stepped field lives on.
    /// The accuracy guard max|V| dt / bbar <= 0.5 keeps the potential phase
    /// per step well inside a radian; violating it is reported, not clamped.
    pub fn new(potential: &[f64], dx: f64, dt: f64, pw: &PilotWaveParams) -> Result<Self> {
        check_line_grid(potential.len(), dx, dt)?;
        let n = potential.len();
        let v_max = potential.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if v_max * dt / pw.bbar > 0.5 {
            return Err(Error::Numeric(format!(
                "potential phase per step {:.3} exceeds 0.5 rad; shrink dt below {:.3e}",
                v_max * dt / pw.bbar,
                0.5 * pw.bbar / v_max
            )));
        }
        let exp_v_half = potential
            .iter()
            .map(|&v| Complex64::from_polar(1.0, -v * dt / (2.0 * pw.bbar)))
            .collect();
        let inv_n = 1.0 / n as f64;
        let exp_k = (0..n)
            .map(|j| {
                let jj = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
                let k = std::f64::consts::TAU * jj as f64 / (n as f64 * dx);
                Complex64::from_polar(inv_n, -pw.bbar * k * k * dt / (2.0 * pw.m0))
            })
            .collect();
        let mut planner = rustfft::FftPlanner::new();
        Ok(Self {
            n,
            dt,
            exp_v_half,
            exp_k,
            fft_fwd: planner.plan_fft_forward(n),
            fft_inv: planner.plan_fft_inverse(n),
        })
    }
}

impl SchrodingerStepper for SplitOperator1D {
    fn schrodinger_step(&mut self, field: &mut ComplexField) -> Result<()> {
        if field.nx != self.n || field.ny != 1 {
            return Err(Error::Config(format!(
                "field grid {}x{} does not match stepper grid {}x1",
                field.nx, field.ny, self.n
            )));
        }
        if field.boundary != Boundary::Periodic {
            return Err(Error::Config("spectral stepping needs a periodic field".into()));
        }
        for (z, p) in field.data.iter_mut().zip(&self.exp_v_half) {
            *z *= p;
        }
        self.fft_fwd.process(&mut field.data);
        for (z, p) in field.data.iter_mut().zip(&self.exp_k) {
            *z *= p;
        }
        self.fft_inv.process(&mut field.data);
        for (z, p) in field.data.iter_mut().zip(&self.exp_v_half) {
            *z *= p;
        }
        Ok(())
    }

    fn dt(&self) -> f64 {
        self.dt
    }
}

/// Imaginary-potential sponge near both domain ends: W(x) ramps cubically
/// from zero at the inner edge to `strength` at the wall, entering the
/// Hamiltonian as -i W so the outgoing flux decays instead of reflecting.
#[derive(Debug, Clone, Copy)]
pub struct SpongeConfig {
    /// Ramp width (mm).
    pub width: f64,
    /// Peak damping energy at the wall (g mm^2/s^2).
    pub strength: f64,
}

/// Implicit trapezoidal stepper with pinned (Dirichlet) ends. The update
/// (1 + i dt H / 2 bbar) psi' = (1 - i dt H / 2 bbar) psi is exactly
/// norm-preserving for real potentials; an absorbing sponge makes the
/// effective potential complex and drains norm by design.
pub struct CrankNicolson1D {
    n: usize,
    dt: f64,
    boundary: Boundary,
    /// Constant off-diagonal of the implicit matrix.
    off: Complex64,
    /// Cached forward-elimination factors of the constant tridiagonal.
    upper_factor: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
    /// Explicit-side diagonal (off-diagonal is -off).
    rhs_diag: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl CrankNicolson1D {
    pub fn reflecting(potential: &[f64], dx: f64, dt: f64, pw: &PilotWaveParams) -> Result<Self> {
        let v: Vec<Complex64> = potential.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::build(&v, dx, dt, pw, Boundary::Reflecting)
    }

    /// Reflecting walls plus the sponge; `x0` is the coordinate of sample 0.
    pub fn absorbing(
        potential: &[f64],
        dx: f64,
        x0: f64,
        dt: f64,
        pw: &PilotWaveParams,
        sponge: SpongeConfig,
    ) -> Result<Self> {
        let n = potential.len();
        let span = (n - 1) as f64 * dx;
        if !(sponge.width > 0.0) || !(sponge.strength > 0.0) || sponge.width * 2.0 >= span {
            return Err(Error::Config(format!(
                "sponge width {} and strength {} must be positive with 2*width < {span}",
                sponge.width, sponge.strength
            )));
        }
        let x_end = x0 + span;
        let v: Vec<Complex64> = potential
            .iter()
            .enumerate()
            .map(|(i, &vr)| {
                let x = x0 + i as f64 * dx;
                let edge_dist = (x - x0).min(x_end - x);
                let u = (1.0 - edge_dist / sponge.width).max(0.0);
                Complex64::new(vr, -sponge.strength * u * u * u)
            })
            .collect();
        Self::build(&v, dx, dt, pw, Boundary::Absorbing)
    }

    fn build(potential: &[Complex64], dx: f64, dt: f64, pw: &PilotWaveParams, boundary: Boundary) -> Result<Self> {
        check_line_grid(potential.len(), dx, dt)?;
        let n = potential.len();
        // s = dt bbar / (4 m0 dx^2) multiplies the second-difference stencil
        let s = dt * pw.bbar / (4.0 * pw.m0 * dx * dx);
        let a = dt / (2.0 * pw.bbar);
        let off = Complex64::new(0.0, -s);
        let i_unit = Complex64::new(0.0, 1.0);
        let mut lhs_diag = Vec::with_capacity(n);
        let mut rhs_diag = Vec::with_capacity(n);
        // lhs = 1 + i(2s + aV), rhs = 1 - i(2s + aV)
        for &v in potential {
            let half = Complex64::new(2.0 * s, 0.0) + v * a;
            lhs_diag.push(Complex64::new(1.0, 0.0) + i_unit * half);
            rhs_diag.push(Complex64::new(1.0, 0.0) - i_unit * half);
        }
        // Forward elimination of the constant tridiagonal (Thomas), cached.
        let mut upper_factor = vec![Complex64::ZERO; n];
        let mut inv_pivot = vec![Complex64::ZERO; n];
        let mut pivot = lhs_diag[0];
        if pivot.norm() == 0.0 {
            return Err(Error::Numeric("singular implicit system".into()));
        }
        inv_pivot[0] = pivot.inv();
        upper_factor[0] = off * inv_pivot[0];
        for i in 1..n {
            pivot = lhs_diag[i] - off * upper_factor[i - 1];
            if pivot.norm() == 0.0 {
                return Err(Error::Numeric("singular implicit system".into()));
            }
            inv_pivot[i] = pivot.inv();
            if i + 1 < n {
                upper_factor[i] = off * inv_pivot[i];
            }
        }
        Ok(Self { n, dt, boundary, off, upper_factor, inv_pivot, rhs_diag, scratch: vec![Complex64::ZERO; n] })
    }
}

impl SchrodingerStepper for CrankNicolson1D {
    fn schrodinger_step(&mut self, field: &mut ComplexField) -> Result<()> {
        if field.nx != self.n || field.ny != 1 {
            return Err(Error::Config(format!(
                "field grid {}x{} does not match stepper grid {}x1",
                field.nx, field.ny, self.n
            )));
        }
        if field.boundary != self.boundary {
            return Err(Error::Config(format!(
                "field boundary {} does not match stepper boundary {}",
                field.boundary, self.boundary
            )));
        }
        let n = self.n;
        let psi = &field.data;
        let d = &mut self.scratch;
        // Explicit half: d = (1 - i dt H / 2 bbar) psi, off-diagonal -off.
        d[0] = self.rhs_diag[0] * psi[0] - self.off * psi[1];
        for i in 1..n - 1 {
            d[i] = self.rhs_diag[i] * psi[i] - self.off * (psi[i - 1] + psi[i + 1]);
        }
        d[n - 1] = self.rhs_diag[n - 1] * psi[n - 1] - self.off * psi[n - 2];
        // Implicit half: cached Thomas sweep.
        d[0] *= self.inv_pivot[0];
        for i in 1..n {
            d[i] = (d[i] - self.off * d[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            let next = d[i + 1];
            d[i] -= self.upper_factor[i] * next;
        }
        field.data.copy_from_slice(d);
        Ok(())
    }

    fn dt(&self) -> f64 {
        self.dt
    }
}
