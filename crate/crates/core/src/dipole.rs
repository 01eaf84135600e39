//! Heteronuclear dipolar coupling under magic-angle spinning: distance →
//! coupling constant, and the rotor-synchronized modulation of the coupling
//! for one crystallite.
//!
//! Conventions, pinned by tests:
//!
//! - the coupling constant is the positive magnitude
//!   `δ = (μ0/4π)·|γ_I·γ_S|·ħ / (2π·r³)` in Hz (the overall sign never
//!   affects peak positions or scale factors — the spectra of ±δ coincide);
//! - the secular coupling enters the Hamiltonian as `d(t)·2IzSz` with
//!
//!   `d(t) = −δ·[(√2/2)·sin 2β·cos(ω_r t + γ) − (1/2)·sin²β·cos 2(ω_r t + γ)]`
//!
//!   for a rotor inclined at the magic angle, where (β, γ) orient the
//!   internuclear vector in the rotor frame. The rotor-period average of
//!   d(t) is exactly zero, which is the whole point of magic-angle spinning.

// Float supplies f64 transcendentals in no_std builds; test builds link std,
// whose inherent methods shadow the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::frames::ChannelSettings;
use crate::matrix::{Complex64, Matrix4};
use crate::spin::SpinOperatorSet;

/// γ(¹H), rad s⁻¹ T⁻¹.
pub const GAMMA_H1: f64 = 2.675_221_28e8;
/// γ(¹⁵N), rad s⁻¹ T⁻¹ (negative; the coupling uses magnitudes).
pub const GAMMA_N15: f64 = -2.7126e7;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// μ0/4π, T·m/A.
pub const MU0_OVER_4PI: f64 = 1e-7;

/// Which gyromagnetic-ratio product the coupling formula uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsotopePair {
    /// ¹⁵N–¹H, the pair this simulator exists for.
    N15H1,
}

impl IsotopePair {
    /// |γ_I·γ_S|, rad² s⁻² T⁻².
    pub fn gamma_product(&self) -> f64 {
        match self {
            IsotopePair::N15H1 => (GAMMA_H1 * GAMMA_N15).abs(),
        }
    }
}

/// Dipolar coupling of one spin pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleCoupling {
    /// Internuclear distance, Å.
    pub r_angstrom: f64,
    /// Coupling constant magnitude, Hz.
    pub delta_hz: f64,
    pub pair: IsotopePair,
}

/// Coupling constant from the internuclear distance.
///
/// For ¹⁵N–¹H at 1.04 Å this gives 10.83 kHz.
pub fn coupling_from_distance(
    r_angstrom: f64,
    pair: IsotopePair,
) -> Result<DipoleCoupling, CoreError> {
    if r_angstrom <= 0.0 {
        return Err(CoreError::NonPositiveDistance { value_angstrom: r_angstrom });
    }
    let r_m = r_angstrom * 1e-10;
    let delta_hz =
        MU0_OVER_4PI * pair.gamma_product() * HBAR / (core::f64::consts::TAU * r_m * r_m * r_m);
    Ok(DipoleCoupling { r_angstrom, delta_hz, pair })
}

impl DipoleCoupling {
    /// Inverse of [`coupling_from_distance`]: fix the coupling, derive the
    /// distance through the cube law. Handy for scanning coupling strengths.
    pub fn from_delta_hz(delta_hz: f64, pair: IsotopePair) -> Result<Self, CoreError> {
        if delta_hz <= 0.0 {
            return Err(CoreError::NonPositiveDistance { value_angstrom: 0.0 });
        }
        let r_m = (MU0_OVER_4PI * pair.gamma_product() * HBAR
            / (core::f64::consts::TAU * delta_hz))
            .powf(1.0 / 3.0);
        Ok(DipoleCoupling { r_angstrom: r_m * 1e10, delta_hz, pair })
    }
}

/// Orientation of the internuclear vector in the rotor frame, with the
/// quadrature weight of the orientation scheme.
///
/// α is carried for completeness but does not enter the axially symmetric
/// coupling; only (β, γ) matter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalliteOrientation {
    pub alpha_rad: f64,
    pub beta_rad: f64,
    pub gamma_rad: f64,
    pub weight: f64,
}

/// Magic-angle spinning configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorConfig {
    /// Spinning frequency, Hz.
    pub omega_r_hz: f64,
    /// Time discretization of one rotor period.
    pub steps_per_period: u32,
}

pub const MIN_STEPS_PER_PERIOD: u32 = 100;
pub const DEFAULT_STEPS_PER_PERIOD: u32 = 200;

impl RotorConfig {
    pub fn new(omega_r_hz: f64, steps_per_period: u32) -> Result<Self, CoreError> {
        if omega_r_hz <= 0.0 {
            return Err(CoreError::NonPositiveRotor { value_hz: omega_r_hz });
        }
        if steps_per_period < MIN_STEPS_PER_PERIOD {
            return Err(CoreError::TooFewSteps {
                steps: steps_per_period,
                minimum: MIN_STEPS_PER_PERIOD,
            });
        }
        Ok(RotorConfig { omega_r_hz, steps_per_period })
    }

    pub fn period_s(&self) -> f64 {
        1.0 / self.omega_r_hz
    }

    /// Propagation step, one steps_per_period-th of the rotor period.
    pub fn step_s(&self) -> f64 {
        self.period_s() / self.steps_per_period as f64
    }
}

/// Rotor-synchronized Fourier components of the dipolar modulation:
/// `d(t) = Σ_n c_n·exp(i n ω_r t)` over n ∈ {−2, −1, 1, 2}, with
/// `c_{−n} = conj(c_n)` so that d(t) is real. There is no n = 0 component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasModulation {
    c1: Complex64,
    c2: Complex64,
}

impl MasModulation {
    /// Component for harmonic n ∈ {−2, −1, 1, 2}; zero for n = 0 and
    /// anything outside the range.
    pub fn component(&self, n: i32) -> Complex64 {
        match n {
            1 => self.c1,
            2 => self.c2,
            -1 => self.c1.conj(),
            -2 => self.c2.conj(),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Evaluate d(t), Hz, for rotor frequency `omega_r_hz`.
    pub fn d_at(&self, t_seconds: f64, omega_r_hz: f64) -> f64 {
        let phi = core::f64::consts::TAU * omega_r_hz * t_seconds;
        let e1 = Complex64::new(phi.cos(), phi.sin());
        let e2 = e1 * e1;
        2.0 * (self.c1 * e1).re + 2.0 * (self.c2 * e2).re
    }
}

/// Fourier components of the modulated coupling for one crystallite:
///
/// `c₁ = −δ·(√2/4)·sin 2β·e^{iγ}`, `c₂ = (δ/4)·sin²β·e^{2iγ}`.
///
/// These reproduce the closed form in the module docs, vanish at β = 0 and
/// average to zero over a rotor period for every orientation.
pub fn mas_coefficients(
    coupling: &DipoleCoupling,
    orientation: &CrystalliteOrientation,
) -> MasModulation {
    let beta = orientation.beta_rad;
    let gamma = orientation.gamma_rad;
    let delta = coupling.delta_hz;
    let e_ig = Complex64::new(gamma.cos(), gamma.sin());
    let root2 = core::f64::consts::SQRT_2;
    let c1 = e_ig * (-delta * root2 / 4.0 * (2.0 * beta).sin());
    let c2 = (e_ig * e_ig) * (delta / 4.0 * beta.sin() * beta.sin());
    MasModulation { c1, c2 }
}

/// Doubly-rotating-frame Hamiltonian at time t, in Hz:
///
/// `H(t) = Ω_I·Iz + ω1_I·Ix + Ω_S·Sz + ω1_S·Sx + d(t)·2IzSz`
///
/// Both rf fields along +x; offsets signed. Hermitian by construction.
pub fn hamiltonian_at(
    t_seconds: f64,
    i_ch: ChannelSettings,
    s_ch: ChannelSettings,
    modulation: &MasModulation,
    rotor: &RotorConfig,
    ops: &SpinOperatorSet,
) -> Matrix4 {
    let mut h = static_hamiltonian(i_ch, s_ch, ops);
    h.add_scaled(modulation.d_at(t_seconds, rotor.omega_r_hz), &ops.izsz);
    h
}

/// The time-independent rf + offset part of the Hamiltonian.
pub fn static_hamiltonian(
    i_ch: ChannelSettings,
    s_ch: ChannelSettings,
    ops: &SpinOperatorSet,
) -> Matrix4 {
    let mut h = Matrix4::zeros();
    h.add_scaled(i_ch.offset_hz, &ops.iz);
    h.add_scaled(i_ch.nutation_hz, &ops.ix);
    h.add_scaled(s_ch.offset_hz, &ops.sz);
    h.add_scaled(s_ch.nutation_hz, &ops.sx);
    h
}
