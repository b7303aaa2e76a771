//! Resonant cubic vertices, second-order self-energies and the nonlinear
//! observables built on them (two-cell ring only).

pub mod asymptotics;
pub mod couplings;
pub mod observables;
pub mod self_energy;
pub mod two_mode;

pub use couplings::EffectiveCouplings;
pub use observables::NonlinearRing;
pub use self_energy::{DiagramType, SelfEnergyModel, TableRow};
