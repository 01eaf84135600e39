//! Error type shared by the core modules.

use core::fmt;

/// Validation failures on the physics inputs.
///
/// These are caller errors, not numerical failures; every operation that can
/// return one documents its precondition.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Matrix handed to the propagator is not Hermitian.
    NotHermitian { defect: f64 },
    /// Both the nutation and the offset of a channel are zero, so the tilt
    /// angle of the effective field is undefined.
    ZeroEffectiveField,
    /// Negative rf nutation frequency.
    NegativeNutation { value_hz: f64 },
    /// Internuclear distance must be positive.
    NonPositiveDistance { value_angstrom: f64 },
    /// Rotor frequency must be positive.
    NonPositiveRotor { value_hz: f64 },
    /// Time discretization of the rotor period is too coarse.
    TooFewSteps { steps: u32, minimum: u32 },
    /// Sequence grid parameters out of range.
    BadSequenceGrid { reason: &'static str },
    /// Powder scheme needs at least one orientation.
    EmptyScheme,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (max |M - M†| = {defect:.3e})")
            }
            CoreError::ZeroEffectiveField => {
                write!(f, "nutation and offset are both zero: tilt angle undefined")
            }
            CoreError::NegativeNutation { value_hz } => {
                write!(f, "nutation frequency must be >= 0 Hz, got {value_hz}")
            }
            CoreError::NonPositiveDistance { value_angstrom } => {
                write!(f, "internuclear distance must be > 0 Å, got {value_angstrom}")
            }
            CoreError::NonPositiveRotor { value_hz } => {
                write!(f, "rotor frequency must be > 0 Hz, got {value_hz}")
            }
            CoreError::TooFewSteps { steps, minimum } => {
                write!(f, "steps_per_period = {steps} is below the minimum {minimum}")
            }
            CoreError::BadSequenceGrid { reason } => {
                write!(f, "invalid sequence grid: {reason}")
            }
            CoreError::EmptyScheme => write!(f, "powder scheme has no orientations"),
        }
    }
}

impl core::error::Error for CoreError {}
