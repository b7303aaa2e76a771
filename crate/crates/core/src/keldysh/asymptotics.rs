//! Large-detuning closed forms near resonance (e), at zero temperature.

use crate::params::critical_coupling;

/// `λ² / (λ + sqrt(4λ² − 3))`.
pub fn c_lambda(lambda: f64) -> f64 {
    lambda * lambda / (lambda + (4.0 * lambda * lambda - 3.0).max(0.0).sqrt())
}

/// Every asymptotic quantity at one `(Δ, λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBundle {
    pub delta: f64,
    pub lambda: f64,
    pub g_minus: f64,
    pub g_plus: f64,
    pub omega_minus_pi: f64,
    pub omega_minus_2pi: f64,
    pub kappa_minus_pi: f64,
    pub kappa_minus_2pi: f64,
    pub g_e: f64,
    pub n_minus_pi: f64,
    pub c_lambda: f64,
    pub c_eff: f64,
    /// Ratio of the two sides of the γ-neglect inequality; small is good.
    pub gamma_neglect_ratio: f64,
    pub gamma_neglect_ok: bool,
    pub delta_opt: f64,
    /// `sqrt(1 − λ²)` over the larger linewidth scale; large is good.
    pub linewidth_margin: f64,
    pub linewidth_ok: bool,
    pub c_eff_bound: f64,
}

/// Margin treated as "much greater than" by the boolean checks.
pub const MUCH_GREATER: f64 = 10.0;

pub fn asymptotic_bundle(omega_m: f64, delta: f64, lambda: f64, kappa: f64, gamma: f64, g1: f64) -> AsymptoticBundle {
    let ad = delta.abs();
    let gc = critical_coupling(omega_m, delta);
    let l2 = lambda * lambda;
    let s = (1.0 - l2).sqrt();
    let q = (4.0 * l2 - 3.0).max(0.0);
    let wr2 = (omega_m / ad).powi(2);
    let c = c_lambda(lambda);
    let g_e2 = 9.0 * q * c * c / (16.0 * (1.0 - l2).powf(1.5)) * wr2 * g1 * g1;
    let n = (ad / omega_m) / (4.0 * s) / (1.0 + (gamma / kappa) * (ad * ad / (omega_m * omega_m)) / (l2 * s));
    let c_eff = 9.0 / 8.0 * ((c / lambda) / (1.0 - l2)).powi(2) * (ad / omega_m).powi(3) * (g1 / kappa).powi(2);
    let gamma_neglect_ratio = (ad * ad / (omega_m * omega_m)) / ((s / q) * kappa / gamma);
    let linewidth_scale = (omega_m * kappa / (ad * ad)).max((gamma / omega_m).sqrt());
    let linewidth_margin = s / linewidth_scale;
    AsymptoticBundle {
        delta,
        lambda,
        g_minus: lambda * gc,
        g_plus: q.sqrt() * gc,
        omega_minus_pi: omega_m * s,
        omega_minus_2pi: 2.0 * omega_m * s,
        kappa_minus_pi: l2 * wr2 * kappa + gamma / s,
        kappa_minus_2pi: q * wr2 * kappa + gamma / (2.0 * s),
        g_e: g_e2.sqrt(),
        n_minus_pi: n,
        c_lambda: c,
        c_eff,
        gamma_neglect_ratio,
        gamma_neglect_ok: gamma_neglect_ratio * MUCH_GREATER <= 1.0,
        delta_opt: -omega_m * (kappa / gamma).sqrt(),
        linewidth_margin,
        linewidth_ok: linewidth_margin >= MUCH_GREATER,
        c_eff_bound: 9.0 / 32.0 * (omega_m / kappa).powi(4) * (ad / omega_m).powi(11) * (g1 / kappa).powi(2),
    }
}
