//! Density-matrix simulation of Lee-Goldburg cross polarization (LGCP) for an
//! isolated heteronuclear spin pair under magic-angle spinning.
//!
//! The crate is organized bottom-up:
//!
//! - [`matrix`]: exact 4×4 complex linear algebra (Hermitian eigensolver,
//!   unitary propagators, density-matrix evolution);
//! - [`spin`]: the two-spin-1/2 product operator basis;
//! - [`frames`]: rotating-frame tilt angles, effective fields and the
//!   rotor-resonance bookkeeping for the dipolar Hamiltonian terms;
//! - [`dipole`]: internuclear distance → dipolar coupling, and the
//!   rotor-modulated coupling coefficients of one crystallite;
//! - [`sequence`]: the LGCP contact itself — spin-locked initial state,
//!   stepwise propagation, detection along the S effective field;
//! - [`powder`]: crystallite orientation schemes and powder averaging.
//!
//! All frequencies are carried in Hz everywhere; the single 2π conversion to
//! angular units happens inside [`matrix::matrix_exponential`]. The engine
//! works in the untilted doubly rotating frame, so every dipolar term is
//! propagated exactly and no secular truncation of the tilted-frame
//! Hamiltonian is involved; the tilted-frame expressions in [`frames`] serve
//! as the analysis layer.
//!
//! `no_std` + `alloc`: the crate has no IO and no OS dependencies.

#![no_std]

extern crate alloc;

pub mod dipole;
pub mod error;
pub mod frames;
pub mod matrix;
pub mod powder;
pub mod sequence;
pub mod spin;

pub use error::CoreError;
pub use matrix::{evolve, expectation, matrix_exponential, Complex64, Matrix4};
pub use spin::{build_operators, SpinOperatorSet};
