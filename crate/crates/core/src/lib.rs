//! Four-mode optomechanical ring: linear polaritons, resonant three-polariton
//! scattering, second-order Keldysh spectra and a Fabry-Perot realization.
//!
//! Energies are measured in units of the mechanical frequency wherever the
//! caller keeps `omega_m = 1`; nothing in the library assumes it, though.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod device;
pub mod keldysh;
pub mod lindblad;
pub mod par;
pub mod params;
pub mod polariton;
pub mod quad;
pub mod resonance;
pub mod roots;

pub use num_complex::Complex64;
pub use params::{DerivedCouplings, SystemParams, Violation};
pub use polariton::{Branch, ModeIndex, PolaritonSpectrum};
pub use resonance::Process;

/// Errors shared by the physics layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("unstable: {0}")]
    Unstable(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
