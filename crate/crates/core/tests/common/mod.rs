#![allow(dead_code)]

use optoring::resonance::resonant_gplus;
use optoring::{Process, SystemParams};

/// Ring sitting on resonance (e) at `(delta, g_minus)`.
pub fn on_resonance_e(delta: f64, g_minus: f64, kappa: f64, g1: f64) -> SystemParams {
    let gp = resonant_gplus(Process::E, 1.0, delta, g_minus).expect("point inside region (e)");
    SystemParams::from_gpm(delta, gp, g_minus).with_damping(kappa, 1e-4 * kappa).with_bare_g1(g1)
}

/// Δ = −1.5, G₋ = 0.52, κ = 0.1, g₁/κ = 2e-3.
pub fn moderate_detuning() -> SystemParams {
    on_resonance_e(-1.5, 0.52, 0.1, 2e-4)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
