use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Boundary handling for grid evolutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Wrap-around; plane waves stay plane waves.
    Periodic,
    /// Hard wall: the field is pinned to zero at both ends.
    Reflecting,
    /// Hard wall plus an imaginary sponge that drains outgoing flux
    /// near the edges instead of bouncing it back.
    Absorbing,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Reflecting => "reflecting",
            Boundary::Absorbing => "absorbing",
        })
    }
}

/// A complex scalar sampled on a uniform grid. One-dimensional fields use
/// `ny == 1`. Storage is row-major in x: `data[ix * ny + iy]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub data: Vec<Complex64>,
    pub nx: usize,
    pub ny: usize,
    /// Grid spacing along x (mm).
    pub dx: f64,
    /// Grid spacing along y (mm); equal to `dx` for 1D fields.
    pub dy: f64,
    /// Physical coordinate of sample (0, 0).
    pub origin: (f64, f64),
    /// How the edges behave; phase gradients wrap on periodic grids and
    /// fall back to one-sided differences otherwise.
    pub boundary: Boundary,
}

impl ComplexField {
    pub fn zeros(nx: usize, ny: usize, dx: f64, dy: f64, origin: (f64, f64)) -> Result<Self> {
        if nx < 2 || ny < 1 {
            return Err(Error::Config(format!("grid {nx}x{ny} is too small")));
        }
        if !(dx > 0.0) || !(dy > 0.0) {
            return Err(Error::Config(format!("grid spacing must be positive, got dx={dx}, dy={dy}")));
        }
        Ok(Self {
            data: vec![Complex64::ZERO; nx * ny],
            nx,
            ny,
            dx,
            dy,
            origin,
            boundary: Boundary::Periodic,
        })
    }

    /// 1D field on [x0, x0 + n dx).
    pub fn line(n: usize, dx: f64, x0: f64) -> Result<Self> {
        Self::zeros(n, 1, dx, dx, (x0, 0.0))
    }

    /// Fill a 1D field from a function of x.
    pub fn fill_line(&mut self, f: impl Fn(f64) -> Complex64) {
        debug_assert_eq!(self.ny, 1);
        for ix in 0..self.nx {
            self.data[ix] = f(self.x_of(ix));
        }
    }

    #[inline]
    pub fn x_of(&self, ix: usize) -> f64 {
        self.origin.0 + ix as f64 * self.dx
    }

    #[inline]
    pub fn y_of(&self, iy: usize) -> f64 {
        self.origin.1 + iy as f64 * self.dy
    }

    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.data[ix * self.ny + iy]
    }

    #[inline]
    pub fn set(&mut self, ix: usize, iy: usize, v: Complex64) {
        self.data[ix * self.ny + iy] = v;
    }

    /// Cell area (or length for 1D fields).
    pub fn cell_measure(&self) -> f64 {
        if self.ny == 1 { self.dx } else { self.dx * self.dy }
    }

    /// Trapezoid-free Riemann norm: sqrt(sum |psi|^2 * measure). Adequate
    /// for periodic grids and for fields that vanish at the boundary.
    pub fn norm(&self) -> f64 {
        let sum: f64 = self.data.iter().map(|z| z.norm_sqr()).sum();
        (sum * self.cell_measure()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Scale to unit norm. A numerically dead field cannot be normalized.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Numeric(format!("cannot normalize field with norm {n}")));
        }
        let inv = 1.0 / n;
        for z in &mut self.data {
            *z *= inv;
        }
        Ok(())
    }

    /// Write the raw samples as little-endian f64 (re, im) pairs in storage
    /// order to `<stem>.bin`, with a small text header `<stem>.hdr` recording
    /// the grid so the dump can be reloaded without guessing.
    pub fn write_snapshot(&self, stem: &Path, t: f64) -> Result<()> {
        let mut bin = Vec::with_capacity(self.data.len() * 16);
        for z in &self.data {
            bin.extend_from_slice(&z.re.to_le_bytes());
            bin.extend_from_slice(&z.im.to_le_bytes());
        }
        std::fs::write(stem.with_extension("bin"), &bin)?;
        let mut hdr = Vec::new();
        writeln!(hdr, "layout = row-major x, complex128 little-endian")?;
        writeln!(hdr, "nx = {}", self.nx)?;
        writeln!(hdr, "ny = {}", self.ny)?;
        writeln!(hdr, "dx = {}", self.dx)?;
        writeln!(hdr, "dy = {}", self.dy)?;
        writeln!(hdr, "origin_x = {}", self.origin.0)?;
        writeln!(hdr, "origin_y = {}", self.origin.1)?;
        writeln!(hdr, "boundary = {}", self.boundary)?;
        writeln!(hdr, "t = {t}")?;
        std::fs::write(stem.with_extension("hdr"), &hdr)?;
        Ok(())
    }
}
