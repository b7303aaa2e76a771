//! Effective three-polariton couplings of the five resonant vertices.

use crate::polariton::PolaritonSpectrum;
use crate::resonance::Process;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EffectiveCouplings {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl EffectiveCouplings {
    pub fn get(&self, p: Process) -> f64 {
        match p {
            Process::A => self.a,
            Process::B => self.b,
            Process::C => self.c,
            Process::D => self.d,
            Process::E => self.e,
        }
    }
}

fn require_two_cells(spec: &PolaritonSpectrum) -> Result<()> {
    if spec.n_cells() != 2 {
        return Err(Error::Invalid(format!("nonlinear vertices need N = 2, got {}", spec.n_cells())));
    }
    Ok(())
}

/// Vertex couplings from the transformation entries at `π` (`v1`) and `2π` (`v2`).
/// For two cells all phases vanish, so the entries are real.
pub fn effective_couplings(spec: &PolaritonSpectrum) -> Result<EffectiveCouplings> {
    require_two_cells(spec)?;
    let p = &spec.params;
    let t1 = spec.transform(1);
    let t2 = spec.transform(2);
    let v1 = |i, j| t1.at(i, j).re;
    let v2 = |i, j| t2.at(i, j).re;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let gp = (p.g1_bare + p.g2_bare) * s;
    let gm = (p.g1_bare - p.g2_bare) * s;

    let mech1_minus = v1(1, 1) + v1(1, 3);
    let mech1_plus = v1(1, 2) + v1(1, 4);
    let mech2_minus = v2(1, 1) + v2(1, 3);
    let mech2_plus = v2(1, 2) + v2(1, 4);

    let a = gp * mech2_plus * v1(2, 1) * v1(2, 3) + gm * mech1_minus * (v2(2, 2) * v1(2, 1) + v2(2, 4) * v1(2, 3));
    let b = gp * mech2_plus * v2(2, 1) * v2(2, 3) + gm * mech2_minus * (v2(2, 2) * v2(2, 1) + v2(2, 4) * v2(2, 3));
    let c = gp * mech2_minus * (v1(2, 2) * v1(2, 1) + v1(2, 4) * v1(2, 3))
        + gm * (mech1_minus * (v1(2, 2) * v2(2, 1) + v1(2, 4) * v2(2, 3)) + mech1_plus * (v2(2, 1) * v1(2, 3) + v1(2, 1) * v2(2, 3)));
    let d = gp * mech2_plus * (v1(2, 2) * v1(2, 1) + v1(2, 4) * v1(2, 3))
        + gm * (mech1_minus * (v1(2, 2) * v2(2, 2) + v1(2, 4) * v2(2, 4)) + mech1_plus * (v2(2, 2) * v1(2, 3) + v1(2, 1) * v2(2, 4)));
    let e = gp * mech2_minus * v1(2, 1) * v1(2, 3) + gm * mech1_minus * (v2(2, 1) * v1(2, 1) + v2(2, 3) * v1(2, 3));
    Ok(EffectiveCouplings { a, b, c, d, e })
}

/// The (e) vertex written through mixing angles and frequencies.
pub fn g_tilde_e_theta_form(spec: &PolaritonSpectrum) -> Result<f64> {
    require_two_cells(spec)?;
    let p = &spec.params;
    let t1 = spec.transform(1);
    let t2 = spec.transform(2);
    let ad = p.delta.abs();
    let w1 = t1.omega_minus;
    let w2 = t2.omega_minus;
    let gp = p.g1_bare + p.g2_bare;
    let gm = p.g1_bare - p.g2_bare;
    let pre = (2.0 * p.omega_m / w2).sqrt() / 8.0;
    Ok(pre
        * (gp * t1.theta.sin().powi(2) * t2.theta.cos() * (ad / w1 - w1 / ad)
            + gm * (2.0 * t1.theta).sin() * t2.theta.sin() * (ad / w1 + w2 / ad)))
}
