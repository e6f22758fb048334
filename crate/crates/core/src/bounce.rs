use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Vertical tray drive. The tray height is s(t) = A cos(w_d t + phase0) with
/// A = a_m / w_d^2, so the peak acceleration is a_m by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivingConfig {
    /// Peak tray acceleration (mm/s^2).
    pub a_m: f64,
    /// Drive angular frequency (rad/s); twice the bounce frequency in the
    /// period-doubled mode.
    pub drive_angular_frequency: f64,
    /// Drive phase at t = 0 (rad). Zero puts the tray at its crest at t = 0.
    pub phase0: f64,
}

impl DrivingConfig {
    pub fn new(a_m: f64, drive_angular_frequency: f64, phase0: f64, g: f64) -> Result<Self> {
        if !(a_m >= 0.0) || !a_m.is_finite() {
            return Err(Error::Config(format!("peak acceleration must be >= 0, got {a_m}")));
        }
        if !(drive_angular_frequency > 0.0) {
            return Err(Error::Config(format!(
                "drive frequency must be positive, got {drive_angular_frequency}"
            )));
        }
        let ratio = a_m / g;
        if !(0.0..=5.0).contains(&ratio) {
            return Err(Error::Config(format!(
                "forcing ratio a_m/g = {ratio:.3} outside the supported range [0, 5]"
            )));
        }
        Ok(Self { a_m, drive_angular_frequency, phase0 })
    }

    /// Period-doubled drive for the given bath: drive at 2 * omega0.
    pub fn period_doubled(a_m: f64, params: &MediumParams) -> Result<Self> {
        Self::new(a_m, 2.0 * params.omega0, 0.0, params.g)
    }

    /// Tray stroke A = a_m / w_d^2 (mm). A * w_d^2 == a_m exactly.
    pub fn drive_amplitude(&self) -> f64 {
        self.a_m / (self.drive_angular_frequency * self.drive_angular_frequency)
    }

    fn height(&self, t: f64) -> f64 {
        self.drive_amplitude() * (self.drive_angular_frequency * t + self.phase0).cos()
    }

    fn speed(&self, t: f64) -> f64 {
        -self.drive_amplitude()
            * self.drive_angular_frequency
            * (self.drive_angular_frequency * t + self.phase0).sin()
    }
}

/// Horizontal walker state plus the bounce phase it lands at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkerState {
    pub position: [f64; 2],
    pub velocity: [f64; 2],
    /// Landing time within the cycle (s): touches down at t = n tau + t_land.
    pub t_land: f64,
    /// Constant speed enforced by the driving (mm/s).
    pub speed_cap: f64,
}

impl WalkerState {
    pub fn speed(&self) -> f64 {
        self.velocity[0].hypot(self.velocity[1])
    }

    pub fn validate(&self, params: &MediumParams) -> Result<()> {
        if !(0.0..params.tau()).contains(&self.t_land) {
            return Err(Error::Domain(format!(
                "landing phase {} must lie in [0, tau = {})",
                self.t_land,
                params.tau()
            )));
        }
        if self.speed() >= params.c {
            return Err(Error::Domain("walker speed must stay below the wave speed".into()));
        }
        Ok(())
    }
}

/// Net parametric restoring coefficient g - a_m/3. Negative means the driving
/// overpowers gravity and pumps the wave instead of flattening it.
pub fn parametric_gain_sign(a_m: f64, g: f64) -> f64 {
    g - a_m / 3.0
}

/// Landing phase of the period-doubled bounce.
///
/// Takeoff happens where the contact force first vanishes (tray acceleration
/// reaching -g on the rise toward the crest), flight is ballistic, and the
/// next tray intersection is bracketed by a coarse scan and polished by
/// bisection to 1e-10 s. Returns that instant reduced mod tau.
pub fn landing_time(cfg: &DrivingConfig, params: &MediumParams) -> Result<f64> {
    if cfg.a_m <= params.g {
        return Err(Error::Regime(format!(
            "a_m = {} does not exceed g = {}; the droplet never leaves the tray",
            cfg.a_m, params.g
        )));
    }
    let wd = cfg.drive_angular_frequency;
    let drive_period = std::f64::consts::TAU / wd;
    let tau = params.tau();
    // contact force 0: cos(wd t + phase0) = g/a_m on the rising side of the crest
    let alpha = (params.g / cfg.a_m).acos();
    let t_off = (std::f64::consts::TAU - alpha - cfg.phase0) / wd;
    let z_off = cfg.height(t_off);
    let v_off = cfg.speed(t_off);

    let gap = |t: f64| -> f64 {
        let dt = t - t_off;
        z_off + v_off * dt - 0.5 * params.g * dt * dt - cfg.height(t)
    };

    // the gap opens cubically from zero; start past that and scan for the close
    let scan_start = t_off + 0.05 * drive_period;
    if gap(scan_start) <= 0.0 {
        return Err(Error::Regime(
            "flight shorter than a drive period: bouncing mode is not period-doubled".into(),
        ));
    }
    let step = tau / 2000.0;
    let mut lo = scan_start;
    let mut hi = None;
    let mut t = scan_start;
    while t < t_off + 3.0 * tau {
        let next = t + step;
        if gap(next) <= 0.0 {
            lo = t;
            hi = Some(next);
            break;
        }
        t = next;
    }
    let Some(mut hi) = hi else {
        return Err(Error::Regime("no landing within three bounce periods".into()));
    };
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_land = 0.5 * (lo + hi);
    if t_land - t_off < 0.9 * drive_period {
        return Err(Error::Regime(
            "flight shorter than a drive period: bouncing mode is not period-doubled".into(),
        ));
    }
    Ok(t_land.rem_euclid(tau))
}

/// Speed from the landing phase: solves gamma^2 (v^2/c^2 + 1/2) = kappa * T
/// for v in [0, c). Below kappa T = 1/2 only v = 0 solves it (pre-walking).
///
/// Substituting gamma^2 = 1/(1 - v^2/c^2) gives
/// v^2/c^2 = (kappa T - 1/2) / (kappa T + 1), verified against bisection on
/// the defining relation.
pub fn walker_speed(t_land: f64, kappa: f64, params: &MediumParams) -> f64 {
    let kt = kappa * t_land;
    if kt <= 0.5 {
        return 0.0;
    }
    params.c * ((kt - 0.5) / (kt + 1.0)).sqrt()
}

/// Calibration constant that pins a target gamma at a given landing phase.
pub fn kappa_for_anchor(t_anchor: f64, gamma_anchor: f64) -> Result<f64> {
    if !(gamma_anchor >= 1.0) || !(t_anchor > 0.0) {
        return Err(Error::Config(format!(
            "anchor requires gamma >= 1 and T > 0, got gamma={gamma_anchor}, T={t_anchor}"
        )));
    }
    let g2 = gamma_anchor * gamma_anchor;
    let beta2 = 1.0 - 1.0 / g2;
    Ok(g2 * (beta2 + 0.5) / t_anchor)
}

/// Stable offset between droplet and wave crest: the distance at which the
/// landing-slope balance gamma^2 (v^2/c^2 + 1/2) dx = v T holds.
pub fn equilibrium_offset(t_land: f64, v: f64, params: &MediumParams) -> Result<f64> {
    if v.abs() >= params.c {
        return Err(Error::Domain(format!("speed {v} must stay below c = {}", params.c)));
    }
    let beta2 = (v / params.c) * (v / params.c);
    let g2 = 1.0 / (1.0 - beta2);
    Ok(v * t_land / (g2 * (beta2 + 0.5)))
}
