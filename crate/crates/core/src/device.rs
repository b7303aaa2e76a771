//! Two identical membranes inside a Fabry-Perot cavity: optical wavevectors,
//! bare optomechanical couplings and the geometry that makes them pairwise
//! equal, as the ring requires.
//!
//! Lengths are in units of the cavity length unless `length` is changed.

use crate::roots::{brent, sign_changes};
use crate::{Error, Result};
use nalgebra::{Matrix4, Vector4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceConfig {
    pub length: f64,
    /// Membrane positions measured from the cavity center, `q2 < q1`.
    pub q1: f64,
    pub q2: f64,
    pub transmission: f64,
    pub x_zpf: f64,
    pub c_light: f64,
}

impl DeviceConfig {
    pub fn new(q1: f64, q2: f64, transmission: f64) -> Result<Self> {
        DeviceConfig { length: 1.0, q1, q2, transmission, x_zpf: 1.0, c_light: 1.0 }.checked()
    }

    pub fn checked(self) -> Result<Self> {
        let h = 0.5 * self.length;
        if !(self.length > 0.0) {
            return Err(Error::Invalid("cavity length must be positive".into()));
        }
        if !(-h < self.q2 && self.q2 < self.q1 && self.q1 < h) {
            return Err(Error::Invalid(format!("membranes must satisfy -L/2 < q2 < q1 < L/2, got q1={}, q2={}", self.q1, self.q2)));
        }
        if !(self.transmission > 0.0 && self.transmission <= 1.0) {
            return Err(Error::Invalid(format!("transmission must lie in (0, 1], got {}", self.transmission)));
        }
        Ok(self)
    }

    pub fn phi(&self) -> f64 {
        self.transmission.sqrt().acos()
    }

    fn l_tilde(&self) -> f64 {
        self.length + 2.0 * (self.q1 - self.q2)
    }
}

/// Left-hand side of the secular equation at wavevector `k`.
pub fn secular_residual(c: &DeviceConfig, k: f64) -> f64 {
    let (l, ph, d, s) = (c.length, c.phi(), c.q1 - c.q2, c.q1 + c.q2);
    let sp = ph.sin();
    (k * l + 2.0 * ph).sin() + (k * l + 2.0 * k * d).sin() * sp * sp - 2.0 * sp * (k * d - ph).cos() * (k * s).cos()
}

/// `(A, B₁, B₂)` at `k`; `∂k/∂q_j = B_j / A` on a root.
pub fn slope_terms(c: &DeviceConfig, k: f64) -> (f64, f64, f64) {
    let (l, lt, ph) = (c.length, c.l_tilde(), c.phi());
    let sp = ph.sin();
    let a = l * (k * l + 2.0 * ph).cos()
        + lt * (k * lt).cos() * sp * sp
        + 2.0 * (c.q1 * (2.0 * k * c.q1 - ph).sin() + c.q2 * (2.0 * k * c.q2 + ph).sin()) * sp;
    let b1 = -2.0 * k * ((2.0 * k * c.q1 - ph).sin() + (k * lt).cos() * sp) * sp;
    let b2 = -2.0 * k * ((2.0 * k * c.q2 + ph).sin() - (k * lt).cos() * sp) * sp;
    (a, b1, b2)
}

/// All secular roots in `window`, ascending.
pub fn optical_modes(c: &DeviceConfig, window: (f64, f64)) -> Result<Vec<f64>> {
    let (a, b) = window;
    if !(b > a) {
        return Err(Error::Invalid("empty wavevector window".into()));
    }
    // a quarter of the smallest possible root spacing, π / (L + 2|q1 − q2|) / 4
    let step = std::f64::consts::PI / (c.l_tilde().max(c.length) * 16.0);
    let n = ((b - a) / step).ceil() as usize + 1;
    let f = |k: f64| secular_residual(c, k);
    let mut roots = Vec::new();
    for (lo, hi) in sign_changes(f, a, b, n) {
        roots.push(brent(f, lo, hi, 1e-14 * hi.abs().max(1.0), 200)?);
    }
    if roots.is_empty() {
        return Err(Error::NoConvergence(format!("no sign change of the secular equation in [{a}, {b}]")));
    }
    Ok(roots)
}

/// `(g_{i1}, g_{i2})` for the optical mode at root `k`.
pub fn bare_couplings(c: &DeviceConfig, k: f64) -> Result<(f64, f64)> {
    let (a, b1, b2) = slope_terms(c, k);
    if a.abs() < 1e-12 {
        return Err(Error::Invalid(format!("degenerate secular slope at k={k}")));
    }
    let s = c.c_light * c.x_zpf / a;
    Ok((b1 * s, b2 * s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceSolution {
    pub config: DeviceConfig,
    pub k1: f64,
    pub k2: f64,
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
    /// Coupling shared by `g12` and `g21`.
    pub g1_out: f64,
    /// Coupling shared by `g11` and `g22`.
    pub g2_out: f64,
    /// `g_-/g_+`, equal to `G_-/G_+` for identical drives.
    pub ratio: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// `(k₁L, k₂L, q₁/L, q₂/L)` near the configuration drawn for `𝒯 = 0.85`.
pub const DEFAULT_GUESS: [f64; 4] = [12.1893, 14.25639, 0.278, 0.19568];
pub const DEFAULT_TRANSMISSION: f64 = 0.85;

fn system(length: f64, transmission: f64, x: &Vector4<f64>) -> Vector4<f64> {
    let c = DeviceConfig { length, q1: x[2], q2: x[3], transmission, x_zpf: 1.0, c_light: 1.0 };
    let (a1, b11, b12) = slope_terms(&c, x[0]);
    let (a2, b21, b22) = slope_terms(&c, x[1]);
    Vector4::new(secular_residual(&c, x[0]), secular_residual(&c, x[1]), b11 * a2 - b22 * a1, b21 * a1 - b12 * a2)
}

/// Damped Newton on `{F(k₁)=0, F(k₂)=0, g₁₂=g₂₁, g₁₁=g₂₂}` for `(k₁, k₂, q₁, q₂)`.
/// The guess is in units of `length` (`k` as `kL`, `q` as `q/L`).
pub fn solve_symmetric_configuration(length: f64, transmission: f64, guess: [f64; 4]) -> Result<DeviceSolution> {
    let mut x = Vector4::new(guess[0] / length, guess[1] / length, guess[2] * length, guess[3] * length);
    let mut r = system(length, transmission, &x);
    let tol = 1e-13;
    let mut it = 0;
    while r.amax() > tol {
        if it == 100 {
            return Err(Error::NoConvergence(format!("device Newton stalled, residual {:.3e}", r.amax())));
        }
        it += 1;
        let mut jac = Matrix4::zeros();
        for j in 0..4 {
            let h = 1e-7 * x[j].abs().max(length * 1e-2);
            let (mut xp, mut xm) = (x, x);
            xp[j] += h;
            xm[j] -= h;
            jac.set_column(j, &((system(length, transmission, &xp) - system(length, transmission, &xm)) / (2.0 * h)));
        }
        let step = jac.lu().solve(&(-r)).ok_or_else(|| Error::NoConvergence("singular device Jacobian".into()))?;
        let mut t = 1.0;
        loop {
            let trial = x + step * t;
            let rt = system(length, transmission, &trial);
            if rt.norm() < r.norm() || t < 1e-6 {
                x = trial;
                r = rt;
                break;
            }
            t *= 0.5;
        }
    }
    let config = DeviceConfig { length, q1: x[2], q2: x[3], transmission, x_zpf: 1.0, c_light: 1.0 }.checked()?;
    let (k1, k2) = (x[0], x[1]);
    if !(k2 > k1 && k1 > 0.0) {
        return Err(Error::NoConvergence(format!("Newton reached an unordered mode pair k1={k1}, k2={k2}")));
    }
    let (g11, g12) = bare_couplings(&config, k1)?;
    let (g21, g22) = bare_couplings(&config, k2)?;
    let (g1_out, g2_out) = (0.5 * (g12 + g21), 0.5 * (g11 + g22));
    Ok(DeviceSolution {
        config,
        k1,
        k2,
        g11,
        g12,
        g21,
        g22,
        g1_out,
        g2_out,
        ratio: (g1_out - g2_out) / (g1_out + g2_out),
        residual: r.amax(),
        iterations: it,
    })
}
