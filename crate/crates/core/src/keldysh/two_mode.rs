//! The single optical plus single mechanical mode reference system.

use super::observables::NonlinearRing;
use crate::params::SystemParams;
use crate::polariton::{damping_rates, occupations, BogoliubovTransform};
use crate::resonance::gplus_b;
use crate::{Error, Result};

/// Two-mode decay `(+) → (−)(−)` against resonance (e) of the ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeComparison {
    pub delta: f64,
    pub g_dressed: f64,
    pub g_tilde_sq: f64,
    pub kappa_minus: f64,
    pub kappa_plus: f64,
    pub n_minus: f64,
    pub c_eff_two_mode: f64,
    /// `(45/8)(g/κ)²`.
    pub c_eff_estimate: f64,
    pub c_eff_four_mode: f64,
    pub enhancement_ratio: f64,
}

/// Resonant vertex of the two-mode chain for bare coupling `g`.
pub fn two_mode_vertex(t: &BogoliubovTransform, g: f64) -> f64 {
    let v = |i, j| t.at(i, j).re;
    g * ((v(1, 2) + v(1, 4)) * v(2, 1) * v(2, 3) + (v(1, 1) + v(1, 3)) * (v(2, 2) * v(2, 1) + v(2, 4) * v(2, 3)))
}

/// Evaluates the two-mode system at detuning `delta_two` with its dressed
/// coupling tuned on resonance, sharing `κ`, `γ`, `T` and `g = g₁` with
/// `four_mode` (which should sit on resonance (e)).
pub fn two_mode_comparison(four_mode: &SystemParams, delta_two: f64) -> Result<TwoModeComparison> {
    let w = four_mode.omega_m;
    let g_dressed = gplus_b(w, delta_two)
        .ok_or_else(|| Error::Invalid(format!("two-mode resonance needs -2 < delta/omega_m < -1/2, got {delta_two}")))?;
    let p2 = SystemParams { delta: delta_two, g1_dressed: g_dressed, g2_dressed: 0.0, n_cells: 1, ..*four_mode };
    let t = BogoliubovTransform::new(w, delta_two, 0.0, g_dressed, 0.0)?;
    let (km, kp) = damping_rates(&p2, &t);
    let (nm, _) = occupations(&p2, &t);
    let g = four_mode.g1_bare;
    let gt = two_mode_vertex(&t, g);
    let c2 = 4.0 * gt * gt * (1.0 + 2.0 * nm) / (km * kp);
    let c4 = NonlinearRing::new(four_mode)?.effective_cooperativity();
    Ok(TwoModeComparison {
        delta: delta_two,
        g_dressed,
        g_tilde_sq: gt * gt,
        kappa_minus: km,
        kappa_plus: kp,
        n_minus: nm,
        c_eff_two_mode: c2,
        c_eff_estimate: 45.0 / 8.0 * (g / four_mode.kappa).powi(2),
        c_eff_four_mode: c4,
        enhancement_ratio: c4 / c2,
    })
}
