//! Rotating-mode algebra: orbiting droplet pairs as superpositions of the
//! m = +1 and m = -1 modes, their angular momentum and Bloch-sphere
//! parametrization, Pauli-axis projections, and antisymmetric pair fields.

use num_complex::Complex64;

use crate::bessel::{bessel_j, bessel_j_signed};
use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Two-mode state (a1, a2) over the m = +1 and m = -1 rotating modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    pub a1: Complex64,
    pub a2: Complex64,
}

impl SpinState {
    pub fn new(a1: Complex64, a2: Complex64) -> Result<Self> {
        if !(a1.norm_sqr() + a2.norm_sqr() > 0.0) {
            return Err(Error::Domain("state must have at least one nonzero amplitude".into()));
        }
        if !a1.is_finite() || !a2.is_finite() {
            return Err(Error::Domain(format!("amplitudes must be finite, got {a1}, {a2}")));
        }
        Ok(Self { a1, a2 })
    }

    /// The one-real-parameter family (cos alpha, sin alpha).
    pub fn from_alpha(alpha: f64) -> Self {
        Self { a1: Complex64::new(alpha.cos(), 0.0), a2: Complex64::new(alpha.sin(), 0.0) }
    }

    /// Build from sphere coordinates: a1 = e^{iS} cos(beta/2),
    /// a2 = e^{iS} e^{i phi} sin(beta/2). `beta` is a path parameter, not
    /// an angle class: it is NOT folded mod 2 pi, so carrying beta from 0
    /// to 2 pi lands on the negated state even though every projection
    /// returns to its start.
    pub fn from_bloch(s: f64, beta: f64, phi: f64) -> Self {
        let global = Complex64::from_polar(1.0, s);
        Self {
            a1: global * (beta / 2.0).cos(),
            a2: global * Complex64::from_polar((beta / 2.0).sin(), phi),
        }
    }

    /// Principal sphere coordinates (S, beta, phi) with beta in [0, pi]
    /// and phi in (-pi, pi]. The lift that exhibits the double covering
    /// lives in the caller's path parameter; this extraction is pointwise.
    pub fn bloch_angles(&self) -> Result<(f64, f64, f64)> {
        let n1 = self.a1.norm();
        let n2 = self.a2.norm();
        if !(n1 + n2 > 0.0) {
            return Err(Error::Domain("zero state has no sphere coordinates".into()));
        }
        let beta = 2.0 * n2.atan2(n1);
        if n1 == 0.0 {
            // beta = pi exactly; only the product S + phi is defined.
            return Ok((self.a2.arg(), beta, 0.0));
        }
        let s = self.a1.arg();
        let phi = if n2 == 0.0 { 0.0 } else { (self.a2 * self.a1.conj()).arg() };
        Ok((s, beta, phi))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Domain(format!("cannot normalize state with norm {n}")));
        }
        Ok(Self { a1: self.a1 / n, a2: self.a2 / n })
    }
}

/// Extract the sphere coordinates and rebuild the state from them. For a
/// normalized state the reconstruction matches the input exactly (up to
/// rounding); for others it matches after normalization.
pub fn bloch_roundtrip(state: &SpinState) -> Result<((f64, f64, f64), SpinState)> {
    let angles = state.bloch_angles()?;
    Ok((angles, SpinState::from_bloch(angles.0, angles.1, angles.2)))
}

/// Angular momentum carried by the two-mode state, relative to the
/// reference momentum `l0` of a pure m = +1 mode:
/// L = l0 (|a1|^2 - |a2|^2) / (|a1|^2 + |a2|^2). For (cos a, sin a) this
/// is l0 cos(2a).
pub fn angular_momentum(state: &SpinState, l0: f64) -> Result<f64> {
    let total = state.norm_sqr();
    if !(total > 0.0) {
        return Err(Error::Domain("zero state carries no angular momentum".into()));
    }
    Ok(l0 * (state.a1.norm_sqr() - state.a2.norm_sqr()) / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinAxis {
    X,
    Y,
    Z,
}

/// Normalized projection (a* sigma_axis a) / (a* a) with the standard
/// Pauli matrices.
pub fn spin_projection(state: &SpinState, axis: SpinAxis) -> Result<f64> {
    let total = state.norm_sqr();
    if !(total > 0.0) {
        return Err(Error::Domain("zero state has no spin projection".into()));
    }
    let (a1, a2) = (state.a1, state.a2);
    let value = match axis {
        // sigma_x = [[0, 1], [1, 0]]
        SpinAxis::X => (a1.conj() * a2 + a2.conj() * a1).re,
        // sigma_y = [[0, -i], [i, 0]]
        SpinAxis::Y => {
            let i = Complex64::new(0.0, 1.0);
            (a1.conj() * (-i * a2) + a2.conj() * (i * a1)).re
        }
        // sigma_z = [[1, 0], [0, -1]]
        SpinAxis::Z => a1.norm_sqr() - a2.norm_sqr(),
    };
    Ok(value / total)
}

/// All three projections at once; always a point on the unit sphere.
pub fn spin_vector(state: &SpinState) -> Result<(f64, f64, f64)> {
    Ok((
        spin_projection(state, SpinAxis::X)?,
        spin_projection(state, SpinAxis::Y)?,
        spin_projection(state, SpinAxis::Z)?,
    ))
}

/// Complex mode profile chi_m = h0 e^{im theta} J_m(k_r r).
fn chi(m: i32, h0: f64, r: f64, theta: f64, params: &MediumParams) -> Result<Complex64> {
    let radial = bessel_j_signed(m, params.wavenumber() * r)?;
    Ok(Complex64::from_polar(h0, m as f64 * theta) * radial)
}

/// Superposed two-mode field at one point: the complex envelope
/// xi = e^{-i omega0 t} (a1 chi_{+1} + a2 chi_{-1}) and its physical
/// (real) height. The height of (cos a, sin a) interpolates the pure-mode
/// fields pointwise.
pub fn superposed_field(
    state: &SpinState,
    r: f64,
    theta: f64,
    t: f64,
    params: &MediumParams,
) -> Result<(Complex64, f64)> {
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    let carrier = Complex64::from_polar(1.0, -params.omega0 * t);
    let xi = carrier * (state.a1 * chi(1, params.h0, r, theta, params)? + state.a2 * chi(-1, params.h0, r, theta, params)?);
    Ok((xi, xi.re))
}

/// Field energy scale of a state: proportional to |a1|^2 + |a2|^2, so it
/// is constant along the (cos a, sin a) family even as the angular
/// momentum swings from +L0 to -L0 and back.
pub fn energy_proxy(state: &SpinState) -> f64 {
    state.norm_sqr()
}

/// A pair of droplets orbiting at angular frequency Omega, carried by the
/// m = 1 modes at the two Doppler-shifted radial wavenumbers:
/// c k1 = omega0 + Omega, c k2 = omega0 - Omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingPair {
    pub omega: f64,
    pub k1: f64,
    pub k2: f64,
    pub h0: f64,
}

impl RotatingPair {
    pub fn new(h0: f64, omega: f64, params: &MediumParams) -> Result<Self> {
        if !(omega >= 0.0) || omega >= params.omega0 {
            return Err(Error::Domain(format!(
                "orbital frequency {omega} must lie in [0, omega0 = {})",
                params.omega0
            )));
        }
        if !(h0 >= 0.0) {
            return Err(Error::Domain(format!("amplitude must be nonnegative, got {h0}")));
        }
        Ok(Self { omega, k1: (params.omega0 + omega) / params.c, k2: (params.omega0 - omega) / params.c, h0 })
    }
}

/// Exact two-term height of the orbiting pair's wave:
/// h = h0/2 [cos((omega0 + Omega) t - theta) J1(k1 r)
///         + cos((omega0 - Omega) t + theta) J1(k2 r)].
pub fn rotating_pair_height(pair: &RotatingPair, r: f64, theta: f64, t: f64, params: &MediumParams) -> Result<f64> {
    let _ = params;
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    let j1 = bessel_j(1, pair.k1 * r)?;
    let j2 = bessel_j(1, pair.k2 * r)?;
    Ok(0.5
        * pair.h0
        * (((params.omega0 + pair.omega) * t - theta).cos() * j1
            + ((params.omega0 - pair.omega) * t + theta).cos() * j2))
}

/// Factored small-r, small-Omega form of the same wave: a dipole standing
/// wave h0 cos(omega0 t) cos(Omega t - theta) J1(k_r r) whose node line
/// theta = Omega t +- pi/2 rotates with the droplets. Trustworthy for
/// k_r r <= 1 and Omega <= 0.05 omega0; outside that window prefer
/// [`rotating_pair_height`].
pub fn rotating_pair_height_factored(
    pair: &RotatingPair,
    r: f64,
    theta: f64,
    t: f64,
    params: &MediumParams,
) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    let j = bessel_j(1, params.wavenumber() * r)?;
    Ok(pair.h0 * (params.omega0 * t).cos() * (pair.omega * t - theta).cos() * j)
}

/// Bounce-cycle- and angle-averaged overlap of two mode heights at fixed
/// radius: (1/tau) int_0^tau int_0^{2pi} h_m h_n dtheta dt. Distinct
/// orders are orthogonal; equal orders give pi h0^2 J_m(k_r r)^2.
pub fn mode_overlap(m: i32, n: i32, r: f64, params: &MediumParams) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative, got {r}")));
    }
    let kr = params.wavenumber() * r;
    let jm = bessel_j_signed(m, kr)?;
    let jn = bessel_j_signed(n, kr)?;
    // Uniform grids are exact for trigonometric polynomials of bounded
    // degree, so these sample counts are quadrature, not approximation.
    let n_theta = 8 * (m.unsigned_abs().max(n.unsigned_abs()).max(1) as usize) + 8;
    let n_time = 8;
    let mut total = 0.0;
    for it in 0..n_time {
        let t = it as f64 / n_time as f64 * params.tau();
        let wt = params.omega0 * t;
        let mut theta_sum = 0.0;
        for ith in 0..n_theta {
            let theta = ith as f64 / n_theta as f64 * std::f64::consts::TAU;
            theta_sum += (wt - m as f64 * theta).cos() * (wt - n as f64 * theta).cos();
        }
        total += theta_sum * std::f64::consts::TAU / n_theta as f64;
    }
    Ok(params.h0 * params.h0 * jm * jn * total / n_time as f64)
}

/// Antisymmetric combination of one droplet-pair field placed at two
/// centers separated by `d`: xi(x, t) - xi(x - d, t). Swapping the roles
/// of the centers negates the result everywhere.
pub fn antisymmetric_pair_field<F>(xi_a: F, d: (f64, f64), at: ((f64, f64), f64)) -> Complex64
where
    F: Fn((f64, f64), f64) -> Complex64,
{
    let ((x, y), t) = at;
    xi_a((x, y), t) - xi_a((x - d.0, y - d.1), t)
}

/// Effective boundary-mediated coupling of an orbiting pair relative to
/// the static coupling alpha1: alpha2 = (v/c)^2 alpha1.
pub fn pair_boundary_coupling(v: f64, alpha1: f64, params: &MediumParams) -> Result<f64> {
    if v.abs() >= params.c {
        return Err(Error::Domain(format!("orbital speed {v} must stay below c = {}", params.c)));
    }
    if !(alpha1 >= 0.0) {
        return Err(Error::Domain(format!("coupling must be nonnegative, got {alpha1}")));
    }
    Ok((v / params.c) * (v / params.c) * alpha1)
}

/// Result of fitting the far-field azimuthal transport against radius.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculationFit {
    /// Fitted log-log exponent; a vortex gives -1.
    pub slope: f64,
    pub r_squared: f64,
    /// Sense of the circulation: the sign of the mode order.
    pub circulation_sign: i32,
    /// Set when some samples sit between the hard near-field cutoff and
    /// the clean asymptotic regime.
    pub warning: Option<String>,
}

/// Azimuthal transport proxy of mode m at radius r: J_m(k r)^2 averaged
/// over one radial oscillation (window pi/k), which strips the fast Bessel
/// wiggle and leaves the 1/(pi k r) envelope.
pub fn angular_transport_proxy(m: i32, r: f64, params: &MediumParams) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be positive and finite, got {r}")));
    }
    let k = params.wavenumber();
    // One full period of J_m^2 is pi/k; average it with a uniform rule.
    let half_window = 0.5 * std::f64::consts::PI / k;
    if r <= half_window {
        return Err(Error::Domain(format!(
            "radius {r} is inside the averaging window {half_window:.3}; no clean envelope there"
        )));
    }
    let quad = 64usize;
    let mut acc = 0.0;
    for i in 0..quad {
        let rho = r - half_window + (i as f64 + 0.5) / quad as f64 * (2.0 * half_window);
        let j = bessel_j_signed(m, k * rho)?;
        acc += j * j;
    }
    Ok(acc / quad as f64)
}

/// Cycle-averaged azimuthal transport of mode m versus radius, reduced to
/// a log-log power-law fit. The transport proxy is J_m(k_r r)^2 averaged
/// over one radial oscillation, whose envelope falls as 1/(pi k_r r); the
/// fitted exponent is -1 in the vortex regime k_r r >= 10. Samples with
/// k_r r < 2 are rejected: the near field does not behave like a vortex.
pub fn far_field_circulation(m: i32, r_samples: &[f64], params: &MediumParams) -> Result<CirculationFit> {
    if m == 0 {
        return Err(Error::Domain("mode 0 carries no circulation".into()));
    }
    if r_samples.len() < 2 {
        return Err(Error::Config(format!("need at least 2 radii, got {}", r_samples.len())));
    }
    let k = params.wavenumber();
    let mut min_kr = f64::INFINITY;
    for &r in r_samples {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radii must be positive and finite, got {r}")));
        }
        min_kr = min_kr.min(k * r);
    }
    if min_kr < 2.0 {
        return Err(Error::Regime(format!(
            "sample at k r = {min_kr:.2} is in the near field; the flow there is not a vortex"
        )));
    }
    let warning = if min_kr < 10.0 {
        Some(format!("samples down to k r = {min_kr:.2} are below the clean asymptotic regime (k r >= 10)"))
    } else {
        None
    };
    let mut logs: Vec<(f64, f64)> = Vec::with_capacity(r_samples.len());
    for &r in r_samples {
        logs.push((r.ln(), angular_transport_proxy(m, r, params)?.ln()));
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Config("radii must not all coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Ok(CirculationFit { slope, r_squared, circulation_sign: m.signum(), warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn medium() -> MediumParams {
        MediumParams::walker_bath()
    }

    #[test]
    fn angular_momentum_table() {
        let l0 = 2.5;
        for (alpha, expect) in [
            (0.0, 1.0),
            (std::f64::consts::FRAC_PI_4, 0.0),
            (std::f64::consts::FRAC_PI_2, -1.0),
            (3.0 * std::f64::consts::FRAC_PI_4, 0.0),
            (std::f64::consts::PI, 1.0),
        ] {
            let state = SpinState::from_alpha(alpha);
            assert_abs_diff_eq!(angular_momentum(&state, l0).unwrap(), l0 * expect, epsilon = 1e-12);
            assert_abs_diff_eq!(energy_proxy(&state), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn full_cycle_negates_field_but_not_momentum() {
        let p = medium();
        let start = SpinState::from_alpha(0.0);
        let end = SpinState::from_alpha(std::f64::consts::PI);
        for (r, theta, t) in [(3.0, 0.3, 0.001), (8.0, 2.0, 0.013), (0.5, -1.0, 0.04)] {
            let (xi0, h0) = superposed_field(&start, r, theta, t, &p).unwrap();
            let (xi1, h1) = superposed_field(&end, r, theta, t, &p).unwrap();
            assert_abs_diff_eq!(h1, -h0, epsilon = 1e-12);
            assert_abs_diff_eq!((xi1 + xi0).norm(), 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            angular_momentum(&end, 1.0).unwrap(),
            angular_momentum(&start, 1.0).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn superposition_interpolates_pure_modes() {
        let p = medium();
        let alpha = 0.7;
        let state = SpinState::from_alpha(alpha);
        let plus = SpinState::new(Complex64::new(1.0, 0.0), Complex64::ZERO).unwrap();
        let minus = SpinState::new(Complex64::ZERO, Complex64::new(1.0, 0.0)).unwrap();
        for (r, theta, t) in [(2.0, 1.1, 0.002), (6.5, -0.4, 0.019)] {
            let h = superposed_field(&state, r, theta, t, &p).unwrap().1;
            let h_plus = superposed_field(&plus, r, theta, t, &p).unwrap().1;
            let h_minus = superposed_field(&minus, r, theta, t, &p).unwrap().1;
            assert_abs_diff_eq!(h, alpha.cos() * h_plus + alpha.sin() * h_minus, epsilon = 1e-12);
        }
    }

    #[test]
    fn pauli_rows() {
        let s2 = std::f64::consts::SQRT_2;
        let cases = [
            (SpinState::new(Complex64::new(1.0, 0.0), Complex64::ZERO).unwrap(), (0.0, 0.0, 1.0)),
            (
                SpinState::new(Complex64::new(1.0 / s2, 0.0), Complex64::new(1.0 / s2, 0.0)).unwrap(),
                (1.0, 0.0, 0.0),
            ),
            (
                SpinState::new(Complex64::new(0.0, -1.0 / s2), Complex64::new(1.0 / s2, 0.0)).unwrap(),
                (0.0, 1.0, 0.0),
            ),
            (
                SpinState::from_bloch(0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
                (0.0, 1.0, 0.0),
            ),
        ];
        for (state, expect) in cases {
            let (x, y, z) = spin_vector(&state).unwrap();
            assert_abs_diff_eq!(x, expect.0, epsilon = 1e-12);
            assert_abs_diff_eq!(y, expect.1, epsilon = 1e-12);
            assert_abs_diff_eq!(z, expect.2, epsilon = 1e-12);
        }
    }

    #[test]
    fn projections_live_on_unit_sphere_and_ignore_global_phase() {
        for (i, (re1, im1, re2, im2)) in
            [(0.3, -0.2, 0.8, 0.1), (1.0, 2.0, -0.5, 0.25), (0.0, 0.0, 3.0, -4.0)].iter().enumerate()
        {
            let state = SpinState::new(Complex64::new(*re1, *im1), Complex64::new(*re2, *im2)).unwrap();
            let (x, y, z) = spin_vector(&state).unwrap();
            assert_abs_diff_eq!(x * x + y * y + z * z, 1.0, epsilon = 1e-12);
            let phase = Complex64::from_polar(1.0, 0.77 + i as f64);
            let rotated = SpinState::new(state.a1 * phase, state.a2 * phase).unwrap();
            let (xr, yr, zr) = spin_vector(&rotated).unwrap();
            assert_abs_diff_eq!(x, xr, epsilon = 1e-12);
            assert_abs_diff_eq!(y, yr, epsilon = 1e-12);
            assert_abs_diff_eq!(z, zr, epsilon = 1e-12);
            assert_abs_diff_eq!(
                angular_momentum(&rotated, 1.0).unwrap(),
                angular_momentum(&state, 1.0).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn bloch_corners_and_roundtrip() {
        let a = SpinState::from_bloch(0.0, 0.0, 0.0);
        assert_abs_diff_eq!((a.a1 - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.a2.norm(), 0.0, epsilon = 1e-15);
        let b = SpinState::from_bloch(0.0, std::f64::consts::FRAC_PI_2, 0.0);
        assert_abs_diff_eq!(b.a1.re, 1.0 / std::f64::consts::SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.a2.re, 1.0 / std::f64::consts::SQRT_2, epsilon = 1e-15);

        let state = SpinState::new(Complex64::new(0.6, 0.3), Complex64::new(-0.2, 0.7)).unwrap();
        let normalized = state.normalized().unwrap();
        let (_, rebuilt) = bloch_roundtrip(&normalized).unwrap();
        assert_abs_diff_eq!((rebuilt.a1 - normalized.a1).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((rebuilt.a2 - normalized.a2).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn double_covering_along_beta_path() {
        let phi = 0.4;
        let start = SpinState::from_bloch(0.0, 0.0, phi);
        let once = SpinState::from_bloch(0.0, std::f64::consts::TAU, phi);
        let twice = SpinState::from_bloch(0.0, 2.0 * std::f64::consts::TAU, phi);
        assert_abs_diff_eq!((once.a1 + start.a1).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((once.a2 + start.a2).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((twice.a1 - start.a1).norm(), 0.0, epsilon = 1e-12);
        let v0 = spin_vector(&start).unwrap();
        let v1 = spin_vector(&once).unwrap();
        assert_abs_diff_eq!(v0.0, v1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v0.1, v1.1, epsilon = 1e-12);
        assert_abs_diff_eq!(v0.2, v1.2, epsilon = 1e-12);
    }

    #[test]
    fn stationary_pair_is_a_dipole_standing_wave() {
        let p = medium();
        let pair = RotatingPair::new(p.h0, 0.0, &p).unwrap();
        assert_relative_eq!(pair.k1, pair.k2, max_relative = 1e-15);
        for t in [0.0, 0.003, 0.011] {
            for r in [0.5, 2.0, 7.7] {
                // node line fixed on theta = +-pi/2
                let h = rotating_pair_height(&pair, r, std::f64::consts::FRAC_PI_2, t, &p).unwrap();
                assert_abs_diff_eq!(h, 0.0, epsilon = 1e-14);
                let exact = rotating_pair_height(&pair, r, 0.9, t, &p).unwrap();
                let factored = rotating_pair_height_factored(&pair, r, 0.9, t, &p).unwrap();
                assert_abs_diff_eq!(exact, factored, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn factored_form_matches_exact_in_validity_window() {
        // The factored form drops a term proportional to
        // sin(omega0 t) sin(Omega t - theta) (J1(k2 r) - J1(k1 r)), which
        // vanishes at the bounce extrema and peaks mid-cycle. Snapshot
        // agreement at the extrema is percent-level; the full cycle stays
        // within a few percent.
        let p = medium();
        let pair = RotatingPair::new(p.h0, 0.05 * p.omega0, &p).unwrap();
        let scale = p.h0 * bessel_j(1, 1.0).unwrap(); // size of the wave near k r = 1
        let mut worst_extrema = 0.0_f64;
        let mut worst_cycle = 0.0_f64;
        for ir in 0..8 {
            let r = (ir + 1) as f64 / 8.0 / p.wavenumber(); // k r in (0, 1]
            for ith in 0..8 {
                let theta = ith as f64 * std::f64::consts::TAU / 8.0;
                for it in 0..8 {
                    let t = it as f64 * p.tau() / 8.0;
                    let exact = rotating_pair_height(&pair, r, theta, t, &p).unwrap();
                    let factored = rotating_pair_height_factored(&pair, r, theta, t, &p).unwrap();
                    let dev = (exact - factored).abs() / scale;
                    worst_cycle = worst_cycle.max(dev);
                    if it % 4 == 0 {
                        worst_extrema = worst_extrema.max(dev);
                    }
                }
            }
        }
        assert!(worst_extrema < 0.01, "extrema snapshots disagree by {worst_extrema} of the wave scale");
        assert!(worst_cycle < 0.05, "cycle disagrees by {worst_cycle} of the wave scale");
    }

    #[test]
    fn node_line_rotates_with_the_pair() {
        let p = medium();
        let pair = RotatingPair::new(p.h0, 0.02 * p.omega0, &p).unwrap();
        for t in [0.0, 0.007, 0.019] {
            let node_theta = pair.omega * t + std::f64::consts::FRAC_PI_2;
            let h = rotating_pair_height_factored(&pair, 1.5, node_theta, t, &p).unwrap();
            assert_abs_diff_eq!(h, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn pair_validation() {
        let p = medium();
        assert!(RotatingPair::new(p.h0, -0.1, &p).is_err());
        assert!(RotatingPair::new(p.h0, p.omega0, &p).is_err());
        assert!(RotatingPair::new(-1.0, 0.0, &p).is_err());
        let pair = RotatingPair::new(p.h0, 0.3 * p.omega0, &p).unwrap();
        assert!(rotating_pair_height(&pair, -1.0, 0.0, 0.0, &p).is_err());
    }

    #[test]
    fn distinct_modes_are_orthogonal() {
        let p = medium();
        let r = 1.7;
        for m in -2..=2 {
            for n in -2..=2 {
                let overlap = mode_overlap(m, n, r, &p).unwrap();
                if m == n {
                    let j = bessel_j_signed(m, p.wavenumber() * r).unwrap();
                    let expect = std::f64::consts::PI * p.h0 * p.h0 * j * j;
                    assert_relative_eq!(overlap, expect, max_relative = 1e-10);
                } else {
                    assert_abs_diff_eq!(overlap, 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn antisymmetric_field_properties() {
        let p = medium();
        let state = SpinState::from_alpha(0.3);
        let xi_a = |x: (f64, f64), t: f64| {
            let r = (x.0 * x.0 + x.1 * x.1).sqrt();
            let theta = x.1.atan2(x.0);
            superposed_field(&state, r, theta, t, &p).unwrap().0
        };
        let d = (4.0, 0.0);
        // d = 0 vanishes identically
        for at in [((1.0, 2.0), 0.01), ((-3.0, 0.5), 0.02)] {
            assert_abs_diff_eq!(antisymmetric_pair_field(&xi_a, (0.0, 0.0), at).norm(), 0.0, epsilon = 1e-15);
        }
        // exchanging the two centers negates the field: the swapped field
        // is xi_a(x - d) - xi_a(x)
        let swapped = |x: (f64, f64), t: f64| xi_a((x.0 - d.0, x.1 - d.1), t);
        for at in [((1.0, 2.0), 0.01), ((5.0, -1.0), 0.004)] {
            let direct = antisymmetric_pair_field(&xi_a, d, at);
            let exchanged = antisymmetric_pair_field(&swapped, (-d.0, -d.1), at);
            assert_abs_diff_eq!((direct + exchanged).norm(), 0.0, epsilon = 1e-13);
        }
        // for an even building block the combination is odd through the
        // midpoint plane
        let even = |x: (f64, f64), _t: f64| {
            let r2 = x.0 * x.0 + x.1 * x.1;
            Complex64::new((-r2 / 40.0).exp(), 0.0)
        };
        let mid = d.0 / 2.0;
        for (dx, y) in [(0.7, 1.0), (1.9, -2.0)] {
            let plus = antisymmetric_pair_field(&even, d, ((mid + dx, y), 0.0));
            let minus = antisymmetric_pair_field(&even, d, ((mid - dx, y), 0.0));
            assert_abs_diff_eq!((plus + minus).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn orbital_coupling_values() {
        let p = medium();
        let a2 = pair_boundary_coupling(p.c / 4.0, 0.3, &p).unwrap();
        assert_relative_eq!(a2, 0.01875, max_relative = 1e-15);
        assert_eq!(pair_boundary_coupling(0.0, 0.3, &p).unwrap(), 0.0);
        for v in [0.1 * p.c, 0.5 * p.c, 0.9 * p.c] {
            assert!(pair_boundary_coupling(v, 0.3, &p).unwrap() < 0.3);
        }
        assert!(pair_boundary_coupling(p.c, 0.3, &p).is_err());
        assert!(pair_boundary_coupling(1.0, -0.1, &p).is_err());
    }

    #[test]
    fn far_field_transport_is_a_vortex() {
        let p = medium();
        let k = p.wavenumber();
        let radii: Vec<f64> = (0..12).map(|i| (10.0 + 8.0 * i as f64) / k).collect();
        let fit = far_field_circulation(1, &radii, &p).unwrap();
        assert!(fit.warning.is_none());
        assert!((fit.slope + 1.0).abs() < 0.05, "slope {} not a vortex", fit.slope);
        assert!(fit.r_squared > 0.999);
        assert_eq!(fit.circulation_sign, 1);
        let opposite = far_field_circulation(-1, &radii, &p).unwrap();
        assert_eq!(opposite.circulation_sign, -1);
        assert_relative_eq!(opposite.slope, fit.slope, max_relative = 1e-12);
    }

    #[test]
    fn circulation_regime_guards() {
        let p = medium();
        let k = p.wavenumber();
        let near: Vec<f64> = vec![0.5 / k, 1.0 / k, 1.5 / k];
        let err = far_field_circulation(1, &near, &p).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let marginal: Vec<f64> = (0..8).map(|i| (3.0 + 4.0 * i as f64) / k).collect();
        let fit = far_field_circulation(1, &marginal, &p).unwrap();
        assert!(fit.warning.is_some());
        assert!(far_field_circulation(0, &[10.0 / k, 20.0 / k], &p).is_err());
        assert!(far_field_circulation(1, &[10.0 / k], &p).is_err());
    }
}
