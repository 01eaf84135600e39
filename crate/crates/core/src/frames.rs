//! Tilted-frame analysis of the doubly rotating frame: effective fields,
//! tilt angles, rotor-resonance bookkeeping and the trigonometric scale
//! products of the dipolar Hamiltonian terms.
//!
//! Nothing here feeds the propagator — the engine runs untilted — but these
//! quantities predict which dipolar terms survive the rotor-period average
//! and how strongly they are scaled, and the CLI `predict`/`report` commands
//! print them next to the numeric results.

use alloc::vec::Vec;

// Float supplies f64 transcendentals in no_std builds; test builds link std,
// whose inherent methods shadow the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;

/// `arctan(√2)` = 54.7356°, the magic angle.
///
/// Stored as a literal because `sqrt` is not const-evaluable; pinned by a
/// test against `SQRT_2.atan()`.
pub const MAGIC_ANGLE: f64 = 0.955_316_618_124_509_3;

/// Rf settings of one channel: nutation frequency and resonance offset.
///
/// The offset is the signed difference between the rf carrier and the
/// resonance of the spin, folded into a single number; carrier and Larmor
/// frequencies are never represented separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSettings {
    /// Rf field strength, Hz. Must be non-negative.
    pub nutation_hz: f64,
    /// Resonance offset, Hz, either sign.
    pub offset_hz: f64,
}

impl ChannelSettings {
    pub fn new(nutation_hz: f64, offset_hz: f64) -> Result<Self, CoreError> {
        if nutation_hz < 0.0 {
            return Err(CoreError::NegativeNutation { value_hz: nutation_hz });
        }
        Ok(ChannelSettings { nutation_hz, offset_hz })
    }

    /// On-resonance channel (offset zero).
    pub fn on_resonance(nutation_hz: f64) -> Result<Self, CoreError> {
        Self::new(nutation_hz, 0.0)
    }
}

/// Effective field of one channel in its rotating frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedFrame {
    /// Tilt of the effective field from the static-field axis, radians,
    /// in [0, π].
    pub theta_rad: f64,
    /// Effective field magnitude, Hz.
    pub omega_eff_hz: f64,
}

impl TiltedFrame {
    pub fn theta_deg(&self) -> f64 {
        self.theta_rad.to_degrees()
    }
}

/// Tilt a channel into its effective-field frame.
///
/// `theta = atan2(nutation, offset)` so that offsets of either sign land in
/// [0, π]; `omega_eff = sqrt(nutation² + offset²)`. Fails if both inputs are
/// zero (the tilt direction would be undefined).
pub fn tilt(ch: ChannelSettings) -> Result<TiltedFrame, CoreError> {
    if ch.nutation_hz < 0.0 {
        return Err(CoreError::NegativeNutation { value_hz: ch.nutation_hz });
    }
    if ch.nutation_hz == 0.0 && ch.offset_hz == 0.0 {
        return Err(CoreError::ZeroEffectiveField);
    }
    Ok(TiltedFrame {
        theta_rad: ch.nutation_hz.atan2(ch.offset_hz),
        omega_eff_hz: ch.nutation_hz.hypot(ch.offset_hz),
    })
}

/// Sum and (signed) difference of the two effective fields, Hz.
pub fn sum_diff(i: TiltedFrame, s: TiltedFrame) -> (f64, f64) {
    (
        i.omega_eff_hz + s.omega_eff_hz,
        i.omega_eff_hz - s.omega_eff_hz,
    )
}

/// Families of time-dependent terms in the tilted-frame dipolar Hamiltonian,
/// classified by the frequency appearing in their exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermFamily {
    /// Flip-flip terms, exponent Σ_eff = ω_I,eff + ω_S,eff.
    DoubleQuantum,
    /// Flip-flop terms, exponent Δ_eff = ω_I,eff − ω_S,eff.
    ZeroQuantum,
    /// I±·Sz terms, exponent ±ω_I,eff.
    ISingleSpin,
    /// Iz·S± terms, exponent ±ω_S,eff.
    SSingleSpin,
}

impl TermFamily {
    pub const ALL: [TermFamily; 4] = [
        TermFamily::DoubleQuantum,
        TermFamily::ZeroQuantum,
        TermFamily::ISingleSpin,
        TermFamily::SSingleSpin,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            TermFamily::DoubleQuantum => "double-quantum (sum)",
            TermFamily::ZeroQuantum => "zero-quantum (difference)",
            TermFamily::ISingleSpin => "I single-spin",
            TermFamily::SSingleSpin => "S single-spin",
        }
    }
}

/// Resonance bookkeeping for one term family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceEntry {
    pub term: TermFamily,
    /// Exponent frequency of the family, Hz (signed for the ZQ case).
    pub exponent_hz: f64,
    /// Rotor harmonic in −2..=2 minimizing the mismatch.
    pub n: i32,
    /// `min over n of |exponent − n·ω_r|`, Hz.
    pub mismatch_hz: f64,
    /// True when the mismatch is within the caller's tolerance, i.e. the
    /// term survives the rotor-period time integration.
    pub surviving: bool,
}

/// Survival report for all four term families.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceReport {
    pub rotor_hz: f64,
    pub tolerance_hz: f64,
    pub entries: Vec<ResonanceEntry>,
}

impl ResonanceReport {
    pub fn surviving(&self) -> impl Iterator<Item = &ResonanceEntry> {
        self.entries.iter().filter(|e| e.surviving)
    }
}

/// Default survival tolerance: 1% of a 10 kHz rotor cleanly separates
/// matched from unmatched conditions in every parameter set of interest.
pub const DEFAULT_SURVIVAL_TOLERANCE_HZ: f64 = 100.0;

/// Check each term family's exponent frequency against the rotor harmonics
/// n ∈ −2..=2. A term contributes to the average Hamiltonian only when its
/// exponent is an integral multiple of the rotor frequency; the report lists
/// the closest harmonic and the residual mismatch.
pub fn term_survival(
    i: TiltedFrame,
    s: TiltedFrame,
    rotor_hz: f64,
    tolerance_hz: f64,
) -> Result<ResonanceReport, CoreError> {
    if rotor_hz <= 0.0 {
        return Err(CoreError::NonPositiveRotor { value_hz: rotor_hz });
    }
    let (sigma, delta) = sum_diff(i, s);
    let exponents = [
        (TermFamily::DoubleQuantum, sigma),
        (TermFamily::ZeroQuantum, delta),
        (TermFamily::ISingleSpin, i.omega_eff_hz),
        (TermFamily::SSingleSpin, s.omega_eff_hz),
    ];
    let entries = exponents
        .into_iter()
        .map(|(term, f)| {
            let (n, mismatch) = closest_harmonic(f, rotor_hz);
            ResonanceEntry {
                term,
                exponent_hz: f,
                n,
                mismatch_hz: mismatch,
                surviving: mismatch <= tolerance_hz,
            }
        })
        .collect();
    Ok(ResonanceReport { rotor_hz, tolerance_hz, entries })
}

fn closest_harmonic(f: f64, rotor_hz: f64) -> (i32, f64) {
    let mut best_n = -2;
    let mut best = f64::INFINITY;
    for n in -2..=2 {
        let miss = (f - n as f64 * rotor_hz).abs();
        if miss < best {
            best = miss;
            best_n = n;
        }
    }
    (best_n, best)
}

/// The three trigonometric products scaling the dipolar term families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleProducts {
    /// sinθ_I · sinθ_S, shared by the zero- and double-quantum terms.
    pub zq_dq: f64,
    /// sinθ_I · cosθ_S, the I-spin single-flip terms.
    pub i_flip: f64,
    /// cosθ_I · sinθ_S, the S-spin single-flip terms.
    pub s_flip: f64,
}

pub fn scale_products(i: TiltedFrame, s: TiltedFrame) -> ScaleProducts {
    let (si, ci) = (i.theta_rad.sin(), i.theta_rad.cos());
    let (ss, cs) = (s.theta_rad.sin(), s.theta_rad.cos());
    ScaleProducts {
        zq_dq: si * ss,
        i_flip: si * cs,
        s_flip: ci * ss,
    }
}

/// Zero-quantum peak position, sum form:
///
/// `q = ½·√((ω_I,eff + ω_S,eff)² + (½·δ·sinθ_I·sinθ_S)²)`
///
/// evaluated exactly as printed in the source analysis, which places the SUM
/// of the effective fields inside a zero-quantum expression. The validity
/// condition (at least one rf field on resonance) is the caller's
/// responsibility. See [`predict_zq_peak_difference_form`] for the variant
/// with Δ_eff, kept so the two readings can be compared against the numeric
/// spectrum.
pub fn predict_zq_peak(delta_hz: f64, i: TiltedFrame, s: TiltedFrame) -> f64 {
    let (sigma, _) = sum_diff(i, s);
    zq_peak_formula(sigma, delta_hz, i, s)
}

/// Same expression with the effective-field difference Δ_eff substituted for
/// the printed sum. Zero-quantum dynamics conventionally involve the
/// difference; whether this variant matches the simulated spectrum better is
/// an empirical question the `report` command answers.
pub fn predict_zq_peak_difference_form(delta_hz: f64, i: TiltedFrame, s: TiltedFrame) -> f64 {
    let (_, diff) = sum_diff(i, s);
    zq_peak_formula(diff, delta_hz, i, s)
}

fn zq_peak_formula(field_term: f64, delta_hz: f64, i: TiltedFrame, s: TiltedFrame) -> f64 {
    let scaled = 0.5 * delta_hz * i.theta_rad.sin() * s.theta_rad.sin();
    0.5 * (field_term * field_term + scaled * scaled).sqrt()
}
