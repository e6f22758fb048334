//! The quantum-analogue layer: a complex envelope field evolved by a
//! Schrodinger-type equation, guidance velocities extracted from its phase,
//! and the slit-diffraction and barrier-tunnelling experiments built on top.

pub mod analysis;
pub mod diffract;
pub mod field;
pub mod pilot;
pub mod stepper;
pub mod tunnel;

pub use analysis::{
    bohm_velocity, continuity_residual, dropped_term_ratio, evolve_bohm_ensemble, klein_gordon_residual,
    ks_distance_to_density, sample_from_density, BohmSampler, BohmTrajectory,
};
pub use diffract::{
    diffracted_field, double_slit_first_minimum, far_field_intensity, single_slit_first_minimum,
    streamline_exit_angle, GuidanceConfig, MinimumAngle, SlitApparatus, SlitKind,
};
pub use field::{Boundary, ComplexField};
pub use pilot::{de_broglie_wavelength, pilot_wavenumber, PilotWaveParams, Wavelength};
pub use stepper::{evolve, CrankNicolson1D, SchrodingerStepper, SplitOperator1D, SpongeConfig};
pub use tunnel::{
    rectangular_barrier_transmission, tunnelling_sweep, GaussianPacket, TunnelRunConfig, TunnellingRow,
    TunnellingTable,
};
