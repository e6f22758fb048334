use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Constants of the analogue-wavefunction layer. `bbar` plays the role the
/// reduced action quantum plays in the guidance and dispersion formulas:
/// bbar = m0 c^2 / omega0, so bbar/m0 = c^2/omega0 exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilotWaveParams {
    /// Action scale (g mm^2 / s).
    pub bbar: f64,
    /// Rest-mass analogue (g).
    pub m0: f64,
    /// Rest bounce frequency (rad/s).
    pub omega0: f64,
    /// Wave speed (mm/s).
    pub c: f64,
}

impl PilotWaveParams {
    pub fn new(m0: f64, omega0: f64, c: f64) -> Result<Self> {
        if !(m0 > 0.0) || !(omega0 > 0.0) || !(c > 0.0) {
            return Err(Error::Config(format!(
                "pilot-wave constants must be positive, got m0={m0}, omega0={omega0}, c={c}"
            )));
        }
        Ok(Self { bbar: m0 * c * c / omega0, m0, omega0, c })
    }

    pub fn from_medium(m0: f64, params: &MediumParams) -> Result<Self> {
        Self::new(m0, params.omega0, params.c)
    }

    /// Rest energy m0 c^2 (g mm^2/s^2).
    pub fn rest_energy(&self) -> f64 {
        self.m0 * self.c * self.c
    }

    /// Total energy of a free droplet moving at v_x: E = gamma m0 c^2.
    pub fn free_energy(&self, v_x: f64) -> Result<f64> {
        let beta2 = (v_x / self.c) * (v_x / self.c);
        if beta2 >= 1.0 {
            return Err(Error::Domain(format!("speed {v_x} must stay below c = {}", self.c)));
        }
        Ok(self.rest_energy() / (1.0 - beta2).sqrt())
    }

    /// Momentum analogue p = gamma m0 v_x.
    pub fn momentum(&self, v_x: f64) -> Result<f64> {
        let beta2 = (v_x / self.c) * (v_x / self.c);
        if beta2 >= 1.0 {
            return Err(Error::Domain(format!("speed {v_x} must stay below c = {}", self.c)));
        }
        Ok(self.m0 * v_x / (1.0 - beta2).sqrt())
    }

    /// Local bounce-phase rate in a potential: omega = (m0 c^2 - v) / bbar,
    /// so bbar * omega + v = m0 c^2 pointwise and omega = omega0 at v = 0.
    pub fn phase_rate(&self, potential: f64) -> f64 {
        (self.rest_energy() - potential) / self.bbar
    }
}

/// Plane-wave parameters of the pilot wave carried by a droplet moving at
/// v_x: k = gamma omega0 v_x / c^2 and omega = gamma omega0, which satisfy
/// omega^2 - c^2 k^2 = omega0^2.
pub fn pilot_wavenumber(v_x: f64, pw: &PilotWaveParams) -> Result<(f64, f64)> {
    if v_x.abs() >= pw.c {
        return Err(Error::Domain(format!("speed {v_x} must stay below c = {}", pw.c)));
    }
    let beta2 = (v_x / pw.c) * (v_x / pw.c);
    let gamma = 1.0 / (1.0 - beta2).sqrt();
    Ok((gamma * pw.omega0 * v_x / (pw.c * pw.c), gamma * pw.omega0))
}

/// A wavelength that may be unbounded (stationary droplet).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wavelength {
    Finite(f64),
    Unbounded,
}

impl Wavelength {
    /// The finite value, or infinity for the unbounded case.
    pub fn value(&self) -> f64 {
        match self {
            Wavelength::Finite(l) => *l,
            Wavelength::Unbounded => f64::INFINITY,
        }
    }
}

/// Matter-wavelength of a moving droplet: lambda = 2 pi c^2 / (omega v_x)
/// with omega from [`pilot_wavenumber`]. Satisfies lambda * (gamma m0 v_x)
/// = 2 pi bbar identically. A stationary droplet has no finite wavelength;
/// that case is reported as [`Wavelength::Unbounded`], not an error.
pub fn de_broglie_wavelength(v_x: f64, pw: &PilotWaveParams) -> Result<Wavelength> {
    if v_x < 0.0 || v_x >= pw.c {
        return Err(Error::Domain(format!("speed {v_x} must lie in [0, c = {})", pw.c)));
    }
    if v_x == 0.0 {
        return Ok(Wavelength::Unbounded);
    }
    let (_, omega) = pilot_wavenumber(v_x, pw)?;
    Ok(Wavelength::Finite(2.0 * std::f64::consts::PI * pw.c * pw.c / (omega * v_x)))
}
