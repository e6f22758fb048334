use crate::bessel::{bessel_j, bessel_j_signed};
use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// One bounce event whose wave contributes to a superposed field.
///
/// `m == 0` sources are circular waves: standing when `velocity` is zero,
/// advecting walker waves otherwise. `m != 0` sources are azimuthal modes and
/// must be at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSource {
    /// Emission center at birth (mm).
    pub center: [f64; 2],
    /// Time the source was deposited (s).
    pub birth_time: f64,
    /// Drift velocity of the emitting droplet (mm/s).
    pub velocity: [f64; 2],
    /// Wave amplitude (mm).
    pub amplitude: f64,
    /// Azimuthal integer order; the sign matters (J_{-m} = (-1)^m J_m).
    pub m: i32,
    /// Phase offset (rad).
    pub phase: f64,
}

impl WaveSource {
    /// A stationary circular deposit, the most common source kind.
    pub fn standing(center: [f64; 2], birth_time: f64, amplitude: f64) -> Self {
        Self { center, birth_time, velocity: [0.0, 0.0], amplitude, m: 0, phase: 0.0 }
    }

    pub fn speed(&self) -> f64 {
        self.velocity[0].hypot(self.velocity[1])
    }

    pub fn validate(&self, params: &MediumParams) -> Result<()> {
        if self.amplitude < 0.0 {
            return Err(Error::Domain(format!("source amplitude must be >= 0, got {}", self.amplitude)));
        }
        if self.speed() >= params.c {
            return Err(Error::Domain(format!(
                "source speed {} must stay below the wave speed {}",
                self.speed(),
                params.c
            )));
        }
        if self.m != 0 && self.speed() != 0.0 {
            return Err(Error::Domain("azimuthal modes (m != 0) must be at rest".into()));
        }
        Ok(())
    }
}

/// A frame moving at speed v along x, |v| < c. Carries the exact gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostedFrame {
    v: f64,
    gamma: f64,
}

impl BoostedFrame {
    pub fn new(v: f64, params: &MediumParams) -> Result<Self> {
        if !v.is_finite() || v.abs() >= params.c {
            return Err(Error::Domain(format!(
                "boost speed {v} must satisfy |v| < c = {}",
                params.c
            )));
        }
        let beta2 = (v / params.c) * (v / params.c);
        Ok(Self { v, gamma: 1.0 / (1.0 - beta2).sqrt() })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Circular standing wave: h = -h0 cos(omega0 t) J0(omega0 r / c).
pub fn standing_wave_height(r: f64, t: f64, params: &MediumParams) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    scaled_standing_height(params.h0, r, t, params)
}

fn scaled_standing_height(amplitude: f64, r: f64, t: f64, params: &MediumParams) -> Result<f64> {
    Ok(-amplitude * (params.omega0 * t).cos() * bessel_j(0, params.wavenumber() * r)?)
}

/// Azimuthal mode height: amplitude * cos(omega0 t - m theta + phase) * J_m(k_r r).
///
/// With m = 0 and phase = pi this reduces to the standing wave; with phase = 0
/// it is the standing wave negated.
pub fn rotating_mode_height(
    src: &WaveSource,
    r: f64,
    theta: f64,
    t: f64,
    params: &MediumParams,
) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be >= 0, got {r}")));
    }
    let k_r = params.wavenumber();
    let carrier = (params.omega0 * t - src.m as f64 * theta + src.phase).cos();
    Ok(src.amplitude * carrier * bessel_j_signed(src.m, k_r * r)?)
}

/// x' = gamma (x - v t), y' = y, t' = gamma (t - v x / c^2).
pub fn lorentz_boost(point: (f64, f64, f64), frame: &BoostedFrame, params: &MediumParams) -> (f64, f64, f64) {
    let (x, y, t) = point;
    let g = frame.gamma();
    let v = frame.v();
    let c2 = params.c * params.c;
    (g * (x - v * t), y, g * (t - v * x / c2))
}

/// Wave field of a steadily moving source, in co-moving offsets dx = x - v t.
///
/// h = -h0 cos(omega0 t - gamma^2 omega0 v dx / c^2) J0(omega0 r'' / c)
/// with r''^2 = gamma^4 dx^2 + gamma^2 y^2. Wavefront spacing along the motion
/// axis is contracted by gamma^2 relative to the standing pattern.
pub fn walker_wave_height(
    dx: f64,
    y: f64,
    t: f64,
    frame: &BoostedFrame,
    params: &MediumParams,
) -> Result<f64> {
    scaled_walker_height(params.h0, dx, y, t, frame, params)
}

fn scaled_walker_height(
    amplitude: f64,
    dx: f64,
    y: f64,
    t: f64,
    frame: &BoostedFrame,
    params: &MediumParams,
) -> Result<f64> {
    let g = frame.gamma();
    let v = frame.v();
    let c2 = params.c * params.c;
    let g2 = g * g;
    let r2 = g2 * g2 * dx * dx + g2 * y * y;
    let phase = params.omega0 * t - g2 * params.omega0 * v * dx / c2;
    Ok(-amplitude * phase.cos() * bessel_j(0, params.wavenumber() * r2.sqrt())?)
}

/// Closed-form x-derivatives of the moving wave at the droplet (dx = 0, y = 0),
/// evaluated at the landing instant t = T:
///   dh/dx   = -h0 (gamma^2 omega0 / c)(v/c) sin(omega0 T)
///   d2h/dx2 =  h0 (gamma^4 omega0^2 / c^2)((v^2/c^2) cos(omega0 T) + 1/2)
pub fn walker_slope_and_curvature(
    t_land: f64,
    frame: &BoostedFrame,
    params: &MediumParams,
) -> (f64, f64) {
    let g2 = frame.gamma() * frame.gamma();
    let v = frame.v();
    let w = params.omega0;
    let c = params.c;
    let slope = -params.h0 * (g2 * w / c) * (v / c) * (w * t_land).sin();
    let curvature =
        params.h0 * (g2 * g2 * w * w / (c * c)) * ((v * v / (c * c)) * (w * t_land).cos() + 0.5);
    (slope, curvature)
}

/// Sum of source contributions at a lab point (x, y, t). Each source is
/// evaluated in its own frame: offsets relative to `center`, elapsed time
/// relative to `birth_time`, and (for moving sources) co-moving coordinates
/// along the drift direction.
pub fn superpose(sources: &[WaveSource], at: (f64, f64, f64), params: &MediumParams) -> Result<f64> {
    let (x, y, t) = at;
    let mut total = 0.0;
    for src in sources {
        src.validate(params)?;
        let dx0 = x - src.center[0];
        let dy0 = y - src.center[1];
        let ts = t - src.birth_time;
        let speed = src.speed();
        total += if src.m != 0 {
            let r = dx0.hypot(dy0);
            let theta = dy0.atan2(dx0);
            rotating_mode_height(src, r, theta, ts, params)?
        } else if speed == 0.0 {
            // standing deposit; the phase rotates the carrier
            -src.amplitude
                * (params.omega0 * ts + src.phase).cos()
                * bessel_j(0, params.wavenumber() * dx0.hypot(dy0))?
        } else {
            // co-moving decomposition along the drift direction
            let ux = src.velocity[0] / speed;
            let uy = src.velocity[1] / speed;
            let par = dx0 * ux + dy0 * uy;
            let perp = -dx0 * uy + dy0 * ux;
            let frame = BoostedFrame::new(speed, params)?;
            scaled_walker_height(src.amplitude, par - speed * ts, perp, ts, &frame, params)?
        };
    }
    Ok(total)
}

/// Sampling window for the residual verifier: an nx-by-ny patch with lower-left
/// corner (x0, y0), evaluated at time t.
#[derive(Debug, Clone, Copy)]
pub struct ResidualWindow {
    pub x0: f64,
    pub y0: f64,
    pub t: f64,
    pub nx: usize,
    pub ny: usize,
}

/// RMS of the second-order centered-difference residual of
/// (1/c^2) d2h/dt2 - d2h/dx2 - d2h/dy2 over the window.
///
/// Row sums are accumulated in a fixed order and combined with a pairwise
/// reduction, so a partitioned evaluation reproduces the same bits.
pub fn wave_equation_residual<F>(
    field: &F,
    dx: f64,
    dt: f64,
    window: &ResidualWindow,
    params: &MediumParams,
) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    if window.nx == 0 || window.ny == 0 {
        return Err(Error::Domain("residual window is degenerate".into()));
    }
    if !(dx > 0.0) || !(dt > 0.0) {
        return Err(Error::Domain(format!("grid spacings must be positive, got dx={dx} dt={dt}")));
    }
    let c2 = params.c * params.c;
    let t = window.t;
    let mut row_sums = Vec::with_capacity(window.ny);
    for iy in 0..window.ny {
        let y = window.y0 + iy as f64 * dx;
        let mut row = 0.0;
        for ix in 0..window.nx {
            let x = window.x0 + ix as f64 * dx;
            let h0 = field(x, y, t);
            let htt = (field(x, y, t + dt) - 2.0 * h0 + field(x, y, t - dt)) / (dt * dt);
            let hxx = (field(x + dx, y, t) - 2.0 * h0 + field(x - dx, y, t)) / (dx * dx);
            let hyy = (field(x, y + dx, t) - 2.0 * h0 + field(x, y - dx, t)) / (dx * dx);
            let r = htt / c2 - hxx - hyy;
            row += r * r;
        }
        row_sums.push(row);
    }
    let total = pairwise_sum(&mut row_sums);
    Ok((total / (window.nx * window.ny) as f64).sqrt())
}

/// Pairwise tree reduction; the result depends only on element order, not on
/// how the rows were produced.
fn pairwise_sum(v: &mut Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    while v.len() > 1 {
        let half = v.len() / 2;
        for i in 0..half {
            v[i] = v[2 * i] + v[2 * i + 1];
        }
        if v.len() % 2 == 1 {
            let last = *v.last().unwrap();
            v[half] = last;
            v.truncate(half + 1);
        } else {
            v.truncate(half);
        }
    }
    v[0]
}
