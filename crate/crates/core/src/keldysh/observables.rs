//! Cavity spectra with the nonlinearity switched on, and the scalar figures
//! of merit derived from them.

use super::couplings::{effective_couplings, EffectiveCouplings};
use super::self_energy::{dressed_green_function, self_energy_term, SelfEnergyModel};
use crate::params::SystemParams;
use crate::polariton::{cavity_green_with, linear_cavity_green, ModeIndex, PolaritonSpectrum};
use crate::resonance::Process;
use crate::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Two-cell ring with its vertices and the active-process switches.
#[derive(Debug, Clone)]
pub struct NonlinearRing {
    pub spec: PolaritonSpectrum,
    pub couplings: EffectiveCouplings,
    pub model: SelfEnergyModel,
}

impl NonlinearRing {
    pub fn new(params: &SystemParams) -> Result<Self> {
        Self::with_model(params, SelfEnergyModel::default())
    }

    pub fn with_model(params: &SystemParams, model: SelfEnergyModel) -> Result<Self> {
        params.stability_check()?;
        let spec = PolaritonSpectrum::new(params)?;
        let couplings = effective_couplings(&spec)?;
        Ok(NonlinearRing { spec, couplings, model })
    }

    pub fn params(&self) -> &SystemParams {
        &self.spec.params
    }

    pub fn dressed(&self, mode: ModeIndex, omega: f64) -> Complex64 {
        dressed_green_function(&self.spec, &self.couplings, &self.model, mode, omega)
    }

    pub fn cavity_green(&self, omega: f64) -> Complex64 {
        cavity_green_with(&self.spec, omega, |m, w| self.dressed(m, w))
    }

    pub fn linear_cavity_green(&self, omega: f64) -> Complex64 {
        linear_cavity_green(&self.spec, omega)
    }

    pub fn dos(&self, omega: f64) -> f64 {
        -self.cavity_green(omega).im / PI
    }

    pub fn linear_dos(&self, omega: f64) -> f64 {
        -self.linear_cavity_green(omega).im / PI
    }

    /// `|r|^2` of the probe reflection, nonlinear.
    pub fn reflectivity(&self, omega: f64, kappa_cp: f64) -> f64 {
        reflection(self.cavity_green(omega), kappa_cp)
    }

    pub fn linear_reflectivity(&self, omega: f64, kappa_cp: f64) -> f64 {
        reflection(self.linear_cavity_green(omega), kappa_cp)
    }

    /// Single-term approximation around `ω_{-,2π}` keeping only the (e) self-energy.
    pub fn approx_cavity_green(&self, omega: f64) -> Complex64 {
        let m = self.spec.mode(ModeIndex::MINUS_2PI);
        let w = self.spec.transform(2).at(2, 1).norm_sqr() / 2.0;
        let s = self.sigma_e(omega);
        Complex64::new(w, 0.0) / (Complex64::new(omega - m.omega, 0.5 * m.kappa) - s)
    }

    fn sigma_e(&self, omega: f64) -> Complex64 {
        self_energy_term(&self.spec, &self.couplings, ModeIndex::MINUS_2PI, Process::E, omega).expect("(e) row")
    }

    /// Cooperativity of the (e) vertex at exact resonance.
    pub fn effective_cooperativity(&self) -> f64 {
        let m1 = self.spec.mode(ModeIndex::MINUS_PI);
        let m2 = self.spec.mode(ModeIndex::MINUS_2PI);
        4.0 * self.couplings.e.powi(2) * (1.0 + 2.0 * m1.n_occ) / (m1.kappa * m2.kappa)
    }

    /// `Re[iΣ_e(ω_{-,2π})] / (κ_{-,2π}/2)`, equal to the above on resonance
    /// and falling off as a Lorentzian in the mismatch away from it.
    pub fn detuned_cooperativity(&self) -> f64 {
        let m2 = self.spec.mode(ModeIndex::MINUS_2PI);
        (Complex64::i() * self.sigma_e(m2.omega)).re / (0.5 * m2.kappa)
    }

    /// Frequencies for spectra: uniform on `[0, 2ω_{+,2π}]` plus every
    /// polariton peak and its half-width points.
    pub fn default_grid(&self, n: usize) -> Vec<f64> {
        let top = 2.0 * self.spec.mode(ModeIndex::PLUS_2PI).omega;
        let mut g: Vec<f64> = (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect();
        for (_, m) in self.spec.modes() {
            for x in [m.omega - 0.5 * m.kappa, m.omega, m.omega + 0.5 * m.kappa] {
                if x > 0.0 && x < top {
                    g.push(x);
                }
            }
        }
        g.sort_by(|a, b| a.total_cmp(b));
        g.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * top);
        g
    }

    pub fn spectrum(&self, grid: &[f64], kappa_cp: f64) -> SpectrumGrid {
        let rows = crate::par::map_range(grid.len(), |i| {
            let w = grid[i];
            let g0 = self.linear_cavity_green(w);
            let g = self.cavity_green(w);
            (-g0.im / PI, -g.im / PI, reflection(g0, kappa_cp), reflection(g, kappa_cp))
        });
        let mut out = SpectrumGrid { omega: grid.to_vec(), ..Default::default() };
        for (a, b, c, d) in rows {
            out.rho_linear.push(a);
            out.rho_nonlinear.push(b);
            out.reflectivity_linear.push(c);
            out.reflectivity_nonlinear.push(d);
        }
        out
    }

    fn relative_change(&self, w: f64) -> f64 {
        let r0 = self.linear_dos(w);
        if r0 > 0.0 {
            (self.dos(w) - r0).abs() / r0
        } else {
            0.0
        }
    }

    /// Largest relative change of the DOS, located on `grid` and then
    /// polished between the neighbours of the best grid point so the
    /// result varies smoothly with the parameters.
    pub fn nonlinearity_strength(&self, grid: &[f64]) -> f64 {
        let vals: Vec<f64> = grid.iter().map(|&w| self.relative_change(w)).collect();
        let Some((i, &best)) = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
            return 0.0;
        };
        if best == 0.0 {
            return 0.0;
        }
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        best.max(-minimize(|w| -self.relative_change(w), lo, hi, 4))
    }
}

fn reflection(g: Complex64, kappa_cp: f64) -> f64 {
    (Complex64::new(1.0, 0.0) - Complex64::i() * kappa_cp * g).norm_sqr()
}

/// Sampled linear and nonlinear cavity response.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumGrid {
    pub omega: Vec<f64>,
    pub rho_linear: Vec<f64>,
    pub rho_nonlinear: Vec<f64>,
    pub reflectivity_linear: Vec<f64>,
    pub reflectivity_nonlinear: Vec<f64>,
}

/// One cell of an `I_nl` map or line cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapCell {
    pub g_plus: f64,
    pub g_minus: f64,
    pub i_nl: f64,
}

/// Evaluates `I_nl` at one `(G_+, G_-)` keeping `g1_bare` and re-deriving `g2_bare`.
pub fn i_nl_at(base: &SystemParams, g_plus: f64, g_minus: f64, grid_points: usize, model: &SelfEnergyModel) -> Result<f64> {
    let p = SystemParams { g1_dressed: 0.5 * (g_plus + g_minus), g2_dressed: 0.5 * (g_plus - g_minus), ..*base }
        .with_bare_g1(base.g1_bare);
    let ring = NonlinearRing::with_model(&p, model.clone())?;
    let grid = ring.default_grid(grid_points);
    Ok(ring.nonlinearity_strength(&grid))
}

/// `I_nl` over the outer product of `g_plus` × `g_minus`; row-major in `g_minus`.
pub fn i_nl_map(base: &SystemParams, g_plus: &[f64], g_minus: &[f64], grid_points: usize, model: &SelfEnergyModel) -> Result<Vec<MapCell>> {
    let n = g_plus.len() * g_minus.len();
    let cells = crate::par::map_range(n, |idx| {
        let (im, ip) = (idx / g_plus.len(), idx % g_plus.len());
        let (gp, gm) = (g_plus[ip], g_minus[im]);
        i_nl_at(base, gp, gm, grid_points, model).map(|v| MapCell { g_plus: gp, g_minus: gm, i_nl: v })
    });
    cells.into_iter().collect()
}

/// `I_nl` along `G_- = ratio · G_+`.
pub fn line_cut(base: &SystemParams, ratio: f64, g_minus: &[f64], grid_points: usize, model: &SelfEnergyModel) -> Result<Vec<MapCell>> {
    let cells = crate::par::map_range(g_minus.len(), |i| {
        let gm = g_minus[i];
        let gp = gm / ratio;
        i_nl_at(base, gp, gm, grid_points, model).map(|v| MapCell { g_plus: gp, g_minus: gm, i_nl: v })
    });
    cells.into_iter().collect()
}

/// Indices of strict local maxima of `y` exceeding `floor`.
pub fn local_maxima(y: &[f64], floor: f64) -> Vec<usize> {
    (1..y.len().saturating_sub(1)).filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > floor).collect()
}

/// One detuning sample of the profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub delta: f64,
    pub c_eff: f64,
    pub min_reflectivity: f64,
    pub min_reflectivity_linear: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzFit {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetuningProfile {
    pub samples: Vec<ProfileSample>,
    pub fit: LorentzFit,
}

impl DetuningProfile {
    /// Detuning where the nonlinear lift of the reflectivity minimum peaks.
    pub fn reflectivity_peak(&self) -> f64 {
        self.samples
            .iter()
            .max_by(|a, b| (a.min_reflectivity - a.min_reflectivity_linear).total_cmp(&(b.min_reflectivity - b.min_reflectivity_linear)))
            .map(|s| s.delta)
            .unwrap_or(f64::NAN)
    }
}

/// Minimum of `f` on `[a, b]`: dense scan then golden-section polish.
fn minimize(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let (mut bi, mut bv) = (0, f64::INFINITY);
    for i in 0..=n {
        let v = f(a + h * i as f64);
        if v < bv {
            bv = v;
            bi = i;
        }
    }
    let (mut lo, mut hi) = ((a + h * (bi as f64 - 1.0)).max(a), (a + h * (bi as f64 + 1.0)).min(b));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    bv.min(f1).min(f2)
}

/// Fits `A (Γ²/4) / ((x − x0)² + Γ²/4)` by Levenberg-Marquardt.
pub fn fit_lorentzian(x: &[f64], y: &[f64], width_guess: f64) -> Result<LorentzFit> {
    let (imax, &ymax) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).ok_or_else(|| Error::Invalid("empty profile".into()))?;
    if imax == 0 || imax + 1 == y.len() {
        return Err(Error::NoConvergence("peak not bracketed by the detuning grid".into()));
    }
    let model = |p: &Vector3<f64>, xi: f64| {
        let h = 0.25 * p[2] * p[2];
        p[0] * h / ((xi - p[1]).powi(2) + h)
    };
    let cost = |p: &Vector3<f64>| x.iter().zip(y).map(|(&xi, &yi)| (model(p, xi) - yi).powi(2)).sum::<f64>();
    let mut p = Vector3::new(ymax, x[imax], width_guess);
    let mut c = cost(&p);
    let mut mu = 1e-3;
    for _ in 0..500 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&xi, &yi) in x.iter().zip(y) {
            let h = 0.25 * p[2] * p[2];
            let den = (xi - p[1]).powi(2) + h;
            let f = p[0] * h / den;
            let j = Vector3::new(h / den, 2.0 * f * (xi - p[1]) / den, p[0] * 0.5 * p[2] * (xi - p[1]).powi(2) / (den * den));
            jtj += j * j.transpose();
            jtr += j * (yi - f);
        }
        let mut damped = jtj;
        for i in 0..3 {
            damped[(i, i)] *= 1.0 + mu;
        }
        let Some(step) = damped.lu().solve(&jtr) else { break };
        let trial = p + step;
        let ct = cost(&trial);
        if ct < c {
            let done = (c - ct) <= 1e-15 * c || step.norm() <= 1e-13 * p.norm();
            p = trial;
            c = ct;
            mu *= 0.3;
            if done {
                break;
            }
        } else {
            mu *= 10.0;
            if mu > 1e12 {
                break;
            }
        }
    }
    Ok(LorentzFit { center: p[1], width: p[2].abs(), amplitude: p[0], rms: (c / x.len() as f64).sqrt() })
}

/// Samples `C_eff(Δ)` and the probe-reflectivity minimum at fixed `G_±` and
/// bare couplings, then fits a Lorentzian to `C_eff`.
pub fn detuning_profile(params: &SystemParams, deltas: &[f64], width_guess: f64) -> Result<DetuningProfile> {
    let rows = crate::par::map_range(deltas.len(), |i| -> Result<ProfileSample> {
        let p = SystemParams { delta: deltas[i], ..*params };
        let ring = NonlinearRing::new(&p)?;
        let m = ring.spec.mode(ModeIndex::MINUS_2PI);
        let (a, b) = (m.omega - 6.0 * m.kappa, m.omega + 6.0 * m.kappa);
        let kcp = p.kappa_cp;
        Ok(ProfileSample {
            delta: deltas[i],
            c_eff: ring.detuned_cooperativity(),
            min_reflectivity: minimize(|w| ring.reflectivity(w, kcp), a, b, 400),
            min_reflectivity_linear: minimize(|w| ring.linear_reflectivity(w, kcp), a, b, 400),
        })
    });
    let samples: Vec<ProfileSample> = rows.into_iter().collect::<Result<_>>()?;
    let xs: Vec<f64> = samples.iter().map(|s| s.delta).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.c_eff).collect();
    let fit = fit_lorentzian(&xs, &ys, width_guess)?;
    Ok(DetuningProfile { samples, fit })
}
