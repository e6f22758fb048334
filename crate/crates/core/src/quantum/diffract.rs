use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::analysis::BohmSampler;
use crate::quantum::field::{Boundary, ComplexField};

/// Angle of a diffraction minimum, when the geometry admits one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinimumAngle {
    Degrees(f64),
    /// Wavelength too long for this aperture: the pattern has no zero.
    NoMinimum,
}

impl MinimumAngle {
    pub fn degrees(&self) -> Option<f64> {
        match self {
            MinimumAngle::Degrees(d) => Some(*d),
            MinimumAngle::NoMinimum => None,
        }
    }
}

/// First zero of the single-aperture pattern: sin(theta) = lambda / width.
pub fn single_slit_first_minimum(lambda: f64, width: f64) -> Result<MinimumAngle> {
    if !(lambda > 0.0) || !(width > 0.0) {
        return Err(Error::Domain(format!(
            "wavelength and slit width must be positive, got {lambda}, {width}"
        )));
    }
    if lambda > width {
        return Ok(MinimumAngle::NoMinimum);
    }
    Ok(MinimumAngle::Degrees((lambda / width).asin().to_degrees()))
}

/// First interference zero of a two-aperture pattern: half-wave path
/// difference, sin(theta) = lambda / (2 separation).
pub fn double_slit_first_minimum(lambda: f64, separation: f64) -> Result<MinimumAngle> {
    if !(lambda > 0.0) || !(separation > 0.0) {
        return Err(Error::Domain(format!(
            "wavelength and slit separation must be positive, got {lambda}, {separation}"
        )));
    }
    if lambda > 2.0 * separation {
        return Ok(MinimumAngle::NoMinimum);
    }
    Ok(MinimumAngle::Degrees((lambda / (2.0 * separation)).asin().to_degrees()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitKind {
    Single,
    Double,
}

/// Slit openings in an otherwise opaque wall: one opening of `width`
/// centered on the axis, or two openings of `width` centered at
/// +-separation/2.
#[derive(Debug, Clone, Copy)]
pub struct SlitApparatus {
    pub kind: SlitKind,
    /// Opening width (mm).
    pub width: f64,
    /// Center-to-center distance for the double case (mm); ignored for single.
    pub separation: f64,
}

impl SlitApparatus {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) {
            return Err(Error::Config(format!("slit width must be positive, got {}", self.width)));
        }
        if self.kind == SlitKind::Double && !(self.separation >= self.width) {
            return Err(Error::Config(format!(
                "slit separation {} must be at least the width {} or the openings merge",
                self.separation, self.width
            )));
        }
        Ok(())
    }

    pub fn is_open(&self, y: f64) -> bool {
        match self.kind {
            SlitKind::Single => y.abs() <= 0.5 * self.width,
            SlitKind::Double => {
                (y - 0.5 * self.separation).abs() <= 0.5 * self.width
                    || (y + 0.5 * self.separation).abs() <= 0.5 * self.width
            }
        }
    }

    /// Uniform draw over the open part of the wall: u in [0, 1) covers the
    /// single opening, or both openings glued end to end.
    pub fn entry_point(&self, u: f64) -> f64 {
        match self.kind {
            SlitKind::Single => (u - 0.5) * self.width,
            SlitKind::Double => {
                if u < 0.5 {
                    -0.5 * self.separation + (2.0 * u - 0.5) * self.width
                } else {
                    0.5 * self.separation + (2.0 * (u - 0.5) - 0.5) * self.width
                }
            }
        }
    }
}

/// Fraunhofer intensity on a grid of angles (degrees), normalized to 1 on
/// axis: sinc^2 envelope of each opening, times cos^2 fringes for the pair.
pub fn far_field_intensity(
    kind: SlitKind,
    lambda: f64,
    width: f64,
    separation: f64,
    theta_degrees: &[f64],
) -> Result<Vec<f64>> {
    if !(lambda > 0.0) || !(width > 0.0) {
        return Err(Error::Domain(format!(
            "wavelength and slit width must be positive, got {lambda}, {width}"
        )));
    }
    if kind == SlitKind::Double && !(separation >= width) {
        return Err(Error::Domain(format!(
            "slit separation {separation} must be at least the width {width}"
        )));
    }
    let sinc = |u: f64| if u == 0.0 { 1.0 } else { u.sin() / u };
    Ok(theta_degrees
        .iter()
        .map(|&deg| {
            let s = deg.to_radians().sin();
            let env = sinc(std::f64::consts::PI * width * s / lambda);
            let mut i = env * env;
            if kind == SlitKind::Double {
                let f = (std::f64::consts::PI * separation * s / lambda).cos();
                i *= f * f;
            }
            i
        })
        .collect())
}

/// Steady field behind the wall by angular-spectrum propagation: the
/// aperture profile is decomposed into transverse modes, each advanced in x
/// with k_x = sqrt(k^2 - k_y^2) (decaying when evanescent), and resummed
/// per column. The transverse grid straddles the axis at half-integer
/// offsets so a centered aperture stays exactly symmetric.
pub fn diffracted_field(
    apparatus: &SlitApparatus,
    k: f64,
    ny: usize,
    dy: f64,
    nx: usize,
    dx: f64,
) -> Result<ComplexField> {
    apparatus.validate()?;
    if !(k > 0.0) {
        return Err(Error::Domain(format!("wavenumber must be positive, got {k}")));
    }
    if ny < 16 || nx < 2 || !(dy > 0.0) || !(dx > 0.0) {
        return Err(Error::Config(format!("grid {nx}x{ny} with dx={dx}, dy={dy} is too small")));
    }
    let y_of = |j: usize| (j as f64 + 0.5 - ny as f64 / 2.0) * dy;
    let mut spectrum: Vec<Complex64> = (0..ny)
        .map(|j| {
            if apparatus.is_open(y_of(j)) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::ZERO
            }
        })
        .collect();
    let mut planner = rustfft::FftPlanner::new();
    let fwd = planner.plan_fft_forward(ny);
    let inv = planner.plan_fft_inverse(ny);
    fwd.process(&mut spectrum);
    let mut field = ComplexField::zeros(nx, ny, dx, dy, (dx, y_of(0)))?;
    field.boundary = Boundary::Reflecting;
    let inv_ny = 1.0 / ny as f64;
    let mut column = vec![Complex64::ZERO; ny];
    for ix in 0..nx {
        let x = dx * (ix + 1) as f64;
        for (j, col) in column.iter_mut().enumerate() {
            let jj = if j <= ny / 2 { j as i64 } else { j as i64 - ny as i64 };
            let ky = std::f64::consts::TAU * jj as f64 / (ny as f64 * dy);
            let kx2 = k * k - ky * ky;
            let factor = if kx2 >= 0.0 {
                Complex64::from_polar(inv_ny, kx2.sqrt() * x)
            } else {
                Complex64::new(inv_ny * (-(-kx2).sqrt() * x).exp(), 0.0)
            };
            *col = spectrum[j] * factor;
        }
        inv.process(&mut column);
        for (j, &v) in column.iter().enumerate() {
            field.set(ix, j, v);
        }
    }
    Ok(field)
}

/// How a droplet rides a steady guiding field: step length per bounce, how
/// strongly the past direction persists, and where the walk ends.
#[derive(Debug, Clone, Copy)]
pub struct GuidanceConfig {
    /// Distance travelled per bounce (mm).
    pub step: f64,
    /// Memory depth M; the old direction keeps weight exp(-1/M).
    pub memory: f64,
    /// The walk ends when the droplet passes this radius from the wall
    /// center (mm).
    pub exit_radius: f64,
    pub max_steps: usize,
}

impl GuidanceConfig {
    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !(self.memory > 0.0) || !(self.exit_radius > 0.0) || self.max_steps == 0 {
            return Err(Error::Config(format!("invalid guidance configuration {self:?}")));
        }
        Ok(())
    }
}

/// Walk a droplet through a steady field at constant bounce-averaged speed.
/// Each step blends the previous heading with the local phase-gradient
/// direction and moves one step length; the exit bearing (degrees from the
/// axis) is reported once the droplet crosses the exit radius. Droplets
/// crossing a node keep their heading for that step. The sampler must have
/// been built from this field so its node threshold matches.
pub fn streamline_exit_angle(
    field: &ComplexField,
    sampler: &BohmSampler,
    start: (f64, f64),
    cfg: &GuidanceConfig,
) -> Result<f64> {
    cfg.validate()?;
    let w = (-1.0 / cfg.memory).exp();
    let mut pos = start;
    let mut dir = (1.0, 0.0);
    for _ in 0..cfg.max_steps {
        let r = (pos.0 * pos.0 + pos.1 * pos.1).sqrt();
        if r >= cfg.exit_radius {
            return Ok(pos.1.atan2(pos.0).to_degrees());
        }
        match sampler.velocity(field, pos) {
            Ok((vx, vy)) => {
                let speed = (vx * vx + vy * vy).sqrt();
                if speed > 0.0 {
                    let gx = vx / speed;
                    let gy = vy / speed;
                    let bx = w * dir.0 + (1.0 - w) * gx;
                    let by = w * dir.1 + (1.0 - w) * gy;
                    let norm = (bx * bx + by * by).sqrt();
                    if norm > 0.0 {
                        dir = (bx / norm, by / norm);
                    }
                }
            }
            Err(e) if e.is_node() => {}
            Err(e) => return Err(e),
        }
        pos.0 += cfg.step * dir.0;
        pos.1 += cfg.step * dir.1;
    }
    Err(Error::Regime(format!(
        "droplet still inside radius {} after {} steps",
        cfg.exit_radius, cfg.max_steps
    )))
}
