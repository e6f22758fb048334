use crate::error::{Error, Result};
use std::f64::consts::TAU;

/// Physical constants of the vibrated bath that every formula consumes.
///
/// Units are mm / s / g(mass) throughout the crate: speeds in mm/s,
/// accelerations in mm/s^2, densities in g/mm^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Surface-wave speed (mm/s).
    pub c: f64,
    /// Bounce angular frequency (rad/s). The bounce period is `tau() = 2*pi/omega0`.
    pub omega0: f64,
    /// Gravitational acceleration (mm/s^2).
    pub g: f64,
    /// Peak tray forcing acceleration (mm/s^2).
    pub a_m: f64,
    /// Fluid density (g/mm^3).
    pub rho0: f64,
    /// Standing-wave amplitude (mm).
    pub h0: f64,
}

impl MediumParams {
    pub fn new(c: f64, omega0: f64, g: f64, a_m: f64, rho0: f64, h0: f64) -> Result<Self> {
        let p = Self { c, omega0, g, a_m, rho0, h0 };
        p.validate()?;
        Ok(p)
    }

    /// The 25 Hz silicone-oil bath used by the default scenarios:
    /// c = 11.95 mm/s, f0 = 25 Hz bounce (50 Hz drive), 4.2 g forcing.
    pub fn walker_bath() -> Self {
        Self {
            c: 11.95,
            omega0: TAU * 25.0,
            g: 9810.0,
            a_m: 4.2 * 9810.0,
            rho0: 9.5e-4,
            h0: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.c, self.omega0, self.g, self.a_m, self.rho0, self.h0]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Config("medium parameters must be finite".into()));
        }
        if self.c <= 0.0 {
            return Err(Error::Config(format!("wave speed must be positive, got {}", self.c)));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::Config(format!(
                "bounce angular frequency must be positive, got {}",
                self.omega0
            )));
        }
        if self.rho0 <= 0.0 {
            return Err(Error::Config(format!("density must be positive, got {}", self.rho0)));
        }
        if self.h0 < 0.0 {
            return Err(Error::Config(format!("wave amplitude must be >= 0, got {}", self.h0)));
        }
        if self.g < 0.0 || self.a_m < 0.0 {
            return Err(Error::Config("accelerations must be >= 0".into()));
        }
        Ok(())
    }

    /// Bounce period (s). `omega0 * tau() == 2*pi` holds exactly by construction.
    pub fn tau(&self) -> f64 {
        TAU / self.omega0
    }

    /// Field wavenumber omega0/c (1/mm).
    pub fn wavenumber(&self) -> f64 {
        self.omega0 / self.c
    }

    /// Walking requires forcing beyond three gravities: a_m > 3g.
    pub fn is_walking_regime(&self) -> bool {
        self.a_m > 3.0 * self.g
    }
}
