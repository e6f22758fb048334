//! Numerics for bouncing-droplet pilot-wave dynamics.
//!
//! The crate is organized around six layers:
//!
//! - [`wavefield`]: analytic bath-surface solutions (standing, azimuthal, and
//!   boosted walker waves) plus a grid verifier for the wave equation.
//! - [`bounce`]: vertical bounce dynamics, the landing phase T, and the
//!   constant-speed law that links T to the walking speed.
//! - [`forces`]: cycle-averaged interaction laws between pulsating sources,
//!   conventional force constants, and wall reflection off an image source.
//! - [`quantum`]: the analogue wavefunction layer; norm-preserving solvers,
//!   guidance velocities, diffraction, and tunnelling sweeps.
//! - [`spin`]: two-mode rotating-pair algebra on the Bloch sphere.
//! - [`harness`]: deterministic scenario runner, strict config, stats, and
//!   CSV/JSON/binary emitters.
//!
//! Units are mm / s / g(mass) everywhere.

pub mod bessel;
pub mod bounce;
pub mod error;
pub mod forces;
pub mod harness;
pub mod medium;
pub mod quantum;
pub mod spin;
pub mod wavefield;

pub use error::{Error, Result};
pub use medium::MediumParams;
