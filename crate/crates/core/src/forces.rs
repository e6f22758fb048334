use crate::bounce::WalkerState;
use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Flow geometry of a pulsating source: a full sphere in the bulk, or a
/// hemisphere for a source sitting on the surface (flow doubled).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowGeometry {
    FullSphere,
    Hemisphere,
}

/// A pulsating volumetric source: Q(t) = Q_amp sin(frequency * t + phase).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    pub position: [f64; 2],
    /// Peak volumetric flow (mm^3/s).
    pub q_amp: f64,
    pub phase: f64,
    pub frequency: f64,
    pub moving_velocity: [f64; 2],
}

impl Oscillator {
    pub fn new(position: [f64; 2], q_amp: f64, phase: f64, frequency: f64) -> Result<Self> {
        if !(q_amp >= 0.0) {
            return Err(Error::Domain(format!("flow amplitude must be >= 0, got {q_amp}")));
        }
        Ok(Self { position, q_amp, phase, frequency, moving_velocity: [0.0, 0.0] })
    }
}

/// Interaction constants: F = alpha * bbar * c / r^2 with bbar = m_eff c^2 / omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceConstants {
    pub alpha: f64,
    /// Energy x time (g mm^2 / s).
    pub bbar: f64,
    /// Effective inertial mass (g).
    pub m_eff: f64,
    pub omega: f64,
}

/// Whether the fractional-oscillation input sat inside the small-amplitude
/// derivation or had to be flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeValidity {
    Small,
    Flagged,
}

/// Radial flow speed U = -Q/(4 pi r^2), doubled for hemispherical geometry.
pub fn radial_flow_speed(q: f64, r: f64, geometry: FlowGeometry) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let base = -q / (4.0 * std::f64::consts::PI * r * r);
    Ok(match geometry {
        FlowGeometry::FullSphere => base,
        FlowGeometry::Hemisphere => 2.0 * base,
    })
}

/// Cycle-averaged radial force between two sinusoidal sources a distance r
/// apart, spherical geometry: F = rho0 Q1 Q2 cos(dphi) / (8 pi r^2).
/// Positive = attraction (in-phase), negative = repulsion (antiphase).
pub fn pair_force(a: &Oscillator, b: &Oscillator, rho0: f64, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("separation must be positive, got {r}")));
    }
    if a.frequency != b.frequency {
        return Err(Error::Domain(format!(
            "frequency mismatch {} vs {}: beating pairs average to zero and are unsupported",
            a.frequency, b.frequency
        )));
    }
    let dphi = a.phase - b.phase;
    Ok(rho0 * a.q_amp * b.q_amp * dphi.cos() / (8.0 * std::f64::consts::PI * r * r))
}

/// Surface-droplet variant of [`pair_force`]: hemispherical geometry doubles
/// the flow speed, so the cycle-averaged magnitude matches the steady
/// spherical-sink force rho0 Q1 Q2 / (4 pi r^2) at dphi = 0.
pub fn droplet_pair_force(a: &Oscillator, b: &Oscillator, rho0: f64, r: f64) -> Result<f64> {
    Ok(2.0 * pair_force(a, b, rho0, r)?)
}

/// Pumping rate of a bouncing droplet: Q = beta f V.
pub fn droplet_flow_rate(volume: f64, f: f64, beta: f64) -> f64 {
    beta * f * volume
}

/// Constants in conventional form for a pulsating bubble of rest radius r0
/// whose radius oscillates by the fraction `a_frac`:
/// alpha = 3 A^2 (r0 w / c)^3, m_eff = half the displaced mass, bbar = m c^2 / w.
pub fn conventional_constants(
    a_frac: f64,
    r0: f64,
    omega: f64,
    params: &MediumParams,
) -> Result<(ForceConstants, AmplitudeValidity)> {
    if !(a_frac >= 0.0) || !(r0 > 0.0) || !(omega > 0.0) {
        return Err(Error::Domain(format!(
            "need a_frac >= 0, r0 > 0, omega > 0; got {a_frac}, {r0}, {omega}"
        )));
    }
    let alpha = 3.0 * a_frac * a_frac * (r0 * omega / params.c).powi(3);
    let m_eff = 0.5 * params.rho0 * (4.0 / 3.0) * std::f64::consts::PI * r0.powi(3);
    let bbar = m_eff * params.c * params.c / omega;
    let validity = if a_frac <= 0.3 { AmplitudeValidity::Small } else { AmplitudeValidity::Flagged };
    Ok((ForceConstants { alpha, bbar, m_eff, omega }, validity))
}

/// Velocity factor on the force between sources sharing parallel speed v:
/// 1 - v^2/c^2 (the moving-pair reduction).
pub fn magnetic_factor(v: f64, params: &MediumParams) -> Result<f64> {
    if v.abs() >= params.c {
        return Err(Error::Domain(format!("speed {v} must stay below c = {}", params.c)));
    }
    Ok(1.0 - (v / params.c) * (v / params.c))
}

/// One strobed sample of a reflection trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

/// Controls for the wall-reflection integrator.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionConfig {
    /// Integrator step (s).
    pub dt: f64,
    /// Interval between recorded samples (s).
    pub strobe_interval: f64,
    /// Include the velocity-dependent force reduction 1 - v_par^2/c^2.
    pub magnetic: bool,
    /// Tangential kick applied at the turning point: -1, 0, or +1 times the
    /// full available parallel speed. Zero keeps a head-on path head-on.
    pub injected_parallel_sign: f64,
    /// Give up after this much simulated time (s).
    pub max_time: f64,
    /// Stop once the droplet is this far from the wall and receding (mm).
    pub stop_distance: f64,
}

/// Drives a constant-speed walker toward a straight wall at y = wall_y under
/// the image-source repulsion and emits strobed states.
///
/// The image sits mirrored across the wall and bounces antiphase, so the
/// droplet feels a repulsion along the wall normal of magnitude
/// alpha bbar c / (m_eff d_image^2). The drive fixes the droplet speed, so
/// after every step only the wall-parallel velocity component is rescaled to
/// restore |v| = speed_cap; the perpendicular component carries the dynamics.
/// With `magnetic` set, the force is further scaled by 1 - v_par^2/c^2
/// (droplet and image share their parallel velocity).
///
/// A head-on approach has no parallel component to rescale; at the turning
/// point the configured tangential kick injects one, standing in for the
/// symmetry breaking a finite incidence angle provides.
pub fn boundary_reflection(
    walker: &WalkerState,
    wall_y: f64,
    consts: &ForceConstants,
    cfg: &ReflectionConfig,
    params: &MediumParams,
) -> Result<Vec<TrajectoryPoint>> {
    if !(cfg.dt > 0.0) || !(cfg.strobe_interval > 0.0) || !(cfg.max_time > 0.0) {
        return Err(Error::Config("reflection timing controls must be positive".into()));
    }
    if ![-1.0, 0.0, 1.0].contains(&cfg.injected_parallel_sign) {
        return Err(Error::Config("injected parallel sign must be -1, 0, or +1".into()));
    }
    let cap = walker.speed_cap;
    if !(cap > 0.0) {
        return Err(Error::Domain("speed cap must be positive".into()));
    }
    if (walker.speed() - cap).abs() > 1e-9 * cap {
        return Err(Error::Domain("initial speed must equal the speed cap".into()));
    }
    let mut y = walker.position[1];
    let mut x = walker.position[0];
    let mut vx = walker.velocity[0];
    let mut vy = walker.velocity[1];
    let below = y < wall_y;
    if (below && vy <= 0.0) || (!below && vy >= 0.0) || y == wall_y {
        return Err(Error::Domain("walker must start off the wall and approach it".into()));
    }
    // force strength per unit mass; image distance is twice the wall distance
    let k_accel = consts.alpha * consts.bbar * params.c / consts.m_eff;
    let wall_dist = |yy: f64| (wall_y - yy).abs();
    let accel = |yy: f64, vxx: f64| -> f64 {
        let d = wall_dist(yy);
        let mag = if cfg.magnetic { 1.0 - (vxx / params.c) * (vxx / params.c) } else { 1.0 };
        // repulsion points away from the wall
        let dir = if yy < wall_y { -1.0 } else { 1.0 };
        dir * mag * k_accel / (4.0 * d * d)
    };

    // conserved while no parallel component exists and the magnetic term is idle
    let potential = |yy: f64| k_accel / (4.0 * wall_dist(yy));
    let mut conservative_phase = vx == 0.0;
    let e0 = 0.5 * vy * vy + potential(y);

    let mut out = Vec::new();
    let mut t = 0.0;
    let mut next_strobe = 0.0;
    let mut turned = false;
    let approaching_sign = if below { 1.0 } else { -1.0 };
    let d_start = wall_dist(y);

    while t <= cfg.max_time {
        if t >= next_strobe {
            out.push(TrajectoryPoint { t, x, y, vx, vy });
            next_strobe += cfg.strobe_interval;
        }
        // kick-drift-kick on the perpendicular component
        let a1 = accel(y, vx);
        let vy_half = vy + 0.5 * cfg.dt * a1;
        y += cfg.dt * vy_half;
        x += cfg.dt * vx;
        let a2 = accel(y, vx);
        vy = vy_half + 0.5 * cfg.dt * a2;
        t += cfg.dt;

        if wall_dist(y) <= 0.0 {
            return Err(Error::Numeric("droplet crossed the wall; timestep too large".into()));
        }

        // turning point: perpendicular motion reverses
        if !turned && vy * approaching_sign <= 0.0 {
            turned = true;
            if cfg.injected_parallel_sign != 0.0 && vx == 0.0 {
                let avail = (cap * cap - vy * vy).max(0.0).sqrt();
                vx = cfg.injected_parallel_sign * avail;
                conservative_phase = false;
            }
        }

        // constant-speed constraint: rescale only the parallel component
        if vx != 0.0 {
            let room = cap * cap - vy * vy;
            if room <= 0.0 {
                vy = vy.signum() * cap;
                vx = 0.0;
            } else {
                vx = vx.signum() * room.sqrt();
            }
            conservative_phase = false;
        }

        if conservative_phase {
            let e = 0.5 * vy * vy + potential(y);
            if (e - e0).abs() > 1e-3 * (0.5 * cap * cap) {
                return Err(Error::Numeric(format!(
                    "energy drift {:.3e} exceeds tolerance; timestep too large",
                    (e - e0).abs()
                )));
            }
        }

        if turned && wall_dist(y) >= cfg.stop_distance.min(d_start) {
            out.push(TrajectoryPoint { t, x, y, vx, vy });
            return Ok(out);
        }
    }
    Err(Error::Numeric("reflection did not complete within max_time".into()))
}
