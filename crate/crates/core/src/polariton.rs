//! Normal modes of the linearized ring for any even number of cells.

use crate::params::SystemParams;
use crate::{Error, Result};
use nalgebra::Matrix4;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub fn sign(self) -> char {
        match self {
            Branch::Minus => '-',
            Branch::Plus => '+',
        }
    }
}

/// Polariton label: branch and wavevector `k = 2πj/N`, `j ∈ 1..=N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub branch: Branch,
    pub j: usize,
}

impl ModeIndex {
    pub const MINUS_PI: ModeIndex = ModeIndex { branch: Branch::Minus, j: 1 };
    pub const PLUS_PI: ModeIndex = ModeIndex { branch: Branch::Plus, j: 1 };
    pub const MINUS_2PI: ModeIndex = ModeIndex { branch: Branch::Minus, j: 2 };
    pub const PLUS_2PI: ModeIndex = ModeIndex { branch: Branch::Plus, j: 2 };
    /// The four two-cell modes in a fixed order.
    pub const TWO_CELL: [ModeIndex; 4] = [Self::MINUS_PI, Self::PLUS_PI, Self::MINUS_2PI, Self::PLUS_2PI];

    pub fn k(&self, n_cells: usize) -> f64 {
        2.0 * PI * self.j as f64 / n_cells as f64
    }

    /// Position in [`ModeIndex::TWO_CELL`].
    pub fn slot(&self) -> usize {
        (self.j - 1) * 2 + matches!(self.branch, Branch::Plus) as usize
    }

    pub fn label(&self, n_cells: usize) -> String {
        let kpi = 2.0 * self.j as f64 / n_cells as f64;
        if (kpi - 1.0).abs() < 1e-12 {
            format!("({},pi)", self.branch.sign())
        } else if (kpi - 2.0).abs() < 1e-12 {
            format!("({},2pi)", self.branch.sign())
        } else {
            format!("({},{:.4}pi)", self.branch.sign(), kpi)
        }
    }
}

/// `cos k`, `sin k` for `k = 2πj/N`, exact at the two-cell points.
fn cos_sin(j: usize, n: usize) -> (f64, f64) {
    if j.is_multiple_of(n) {
        (1.0, 0.0)
    } else if 2 * j == n {
        (-1.0, 0.0)
    } else {
        let k = 2.0 * PI * j as f64 / n as f64;
        (k.cos(), k.sin())
    }
}

/// `G_k` and `φ_k` from `G1 + G2 e^{ik} = G_k e^{iφ_k}`; `φ_k = 0` when `G_k = 0`.
pub fn many_photon_coupling(p: &SystemParams, k: f64) -> (f64, f64) {
    coupling_from_cos_sin(p, k.cos(), k.sin())
}

fn coupling_from_cos_sin(p: &SystemParams, c: f64, s: f64) -> (f64, f64) {
    let z = Complex64::new(p.g1_dressed + p.g2_dressed * c, p.g2_dressed * s);
    let gk = z.norm();
    let phi = if gk == 0.0 { 0.0 } else { z.arg() };
    (gk, phi)
}

/// Lower and upper polariton frequencies at coupling `gk`.
pub fn polariton_frequencies(omega_m: f64, delta: f64, gk: f64) -> Result<(f64, f64)> {
    let d2 = delta * delta;
    let w2 = omega_m * omega_m;
    let a = 0.5 * (d2 + w2);
    let b = 0.5 * ((d2 - w2).powi(2) + 16.0 * omega_m * delta.abs() * gk * gk).sqrt();
    let plus2 = a + b;
    // product of the squared frequencies, free of cancellation
    let prod = d2 * w2 - 4.0 * omega_m * delta.abs() * gk * gk;
    if !(prod > 0.0) {
        return Err(Error::Unstable(format!("lower polariton frequency not real at G_k = {gk}")));
    }
    Ok(((prod / plus2).sqrt(), plus2.sqrt()))
}

/// Mixing angle in `[0, π/2]`, continuous in `G_k`.
pub fn mixing_angle(omega_m: f64, delta: f64, gk: f64) -> f64 {
    0.5 * (4.0 * gk * (delta.abs() * omega_m).sqrt()).atan2(delta * delta - omega_m * omega_m)
}

fn f_pm(x: f64) -> (f64, f64) {
    let s = x.sqrt();
    (s + 1.0 / s, s - 1.0 / s)
}

/// Bogoliubov transformation at one wavevector.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovTransform {
    pub k: f64,
    pub g_k: f64,
    pub phi: f64,
    pub theta: f64,
    pub omega_minus: f64,
    pub omega_plus: f64,
    /// Rows: phonon (`b`) and photon (`d`); columns `c_-`, `c_+`, `c_-^†`, `c_+^†`.
    pub v: [[Complex64; 4]; 2],
}

impl BogoliubovTransform {
    pub fn new(omega_m: f64, delta: f64, k: f64, g_k: f64, phi: f64) -> Result<Self> {
        let (wm, wp) = polariton_frequencies(omega_m, delta, g_k)?;
        let theta = mixing_angle(omega_m, delta, g_k);
        let (c, s) = (theta.cos(), theta.sin());
        let ph = Complex64::from_polar(0.5, 0.5 * phi);
        let pc = ph.conj();
        let ad = delta.abs();
        let (a1p, a1m) = f_pm(omega_m / wm);
        let (a2p, a2m) = f_pm(omega_m / wp);
        let (b1p, b1m) = f_pm(ad / wm);
        let (b2p, b2m) = f_pm(ad / wp);
        let v = [
            [ph * (a1p * c), ph * (a2p * s), ph * (a1m * c), ph * (a2m * s)],
            [-pc * (b1p * s), pc * (b2p * c), -pc * (b1m * s), pc * (b2m * c)],
        ];
        Ok(BogoliubovTransform { k, g_k, phi, theta, omega_minus: wm, omega_plus: wp, v })
    }

    /// `V_{ij}` with the one-based indices used in the literature.
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.v[i - 1][j - 1]
    }

    /// Full 4×4 map from `(c_-, c_+, c_-^†, c_+^†)` to `(b, d, b^†, d^†)`.
    pub fn full_matrix(&self) -> Matrix4<Complex64> {
        let v = &self.v;
        Matrix4::new(
            v[0][0], v[0][1], v[0][2], v[0][3],
            v[1][0], v[1][1], v[1][2], v[1][3],
            v[0][2], v[0][3], v[0][0], v[0][1],
            v[1][2], v[1][3], v[1][0], v[1][1],
        )
    }
}

/// Frequency, damping, occupation and effective temperature of one polariton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub omega: f64,
    pub kappa: f64,
    pub n_occ: f64,
    pub t_eff: f64,
}

/// Bose factor at temperature `t` (zero at `t = 0`).
pub fn bose(omega: f64, t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        1.0 / (omega / t).exp_m1()
    }
}

/// Temperature reproducing occupation `n` at frequency `omega`.
pub fn effective_temperature(omega: f64, n: f64) -> f64 {
    if n <= 0.0 {
        0.0
    } else {
        omega / (1.0 / n).ln_1p()
    }
}

/// `(κ_-, κ_+)` from the transformation entries.
pub fn damping_rates(p: &SystemParams, t: &BogoliubovTransform) -> (f64, f64) {
    let v = &t.v;
    let km = p.kappa * (v[1][0].norm_sqr() - v[1][2].norm_sqr()) + p.gamma * (v[0][0] + v[0][2]).norm_sqr();
    let kp = p.kappa * (v[1][1].norm_sqr() - v[1][3].norm_sqr()) + p.gamma * (v[0][1] + v[0][3]).norm_sqr();
    (km, kp)
}

/// `(κ_-, κ_+)` written through the mixing angle.
pub fn damping_rates_theta(p: &SystemParams, t: &BogoliubovTransform) -> (f64, f64) {
    let (c2, s2) = (t.theta.cos().powi(2), t.theta.sin().powi(2));
    let km = p.kappa * s2 + p.gamma * p.omega_m / t.omega_minus * c2;
    let kp = p.kappa * c2 + p.gamma * p.omega_m / t.omega_plus * s2;
    (km, kp)
}

/// `(n_-, n_+)`; the optical bath contributes through the anomalous entries only.
pub fn occupations(p: &SystemParams, t: &BogoliubovTransform) -> (f64, f64) {
    let v = &t.v;
    let (km, kp) = damping_rates(p, t);
    let nm = (p.kappa * v[1][2].norm_sqr() + p.gamma * (v[0][0] + v[0][2]).norm_sqr() * bose(t.omega_minus, p.temperature)) / km;
    let np = (p.kappa * v[1][3].norm_sqr() + p.gamma * (v[0][1] + v[0][3]).norm_sqr() * bose(t.omega_plus, p.temperature)) / kp;
    (nm, np)
}

/// Zero-temperature occupations through the mixing angle.
pub fn occupations_theta_zero_t(p: &SystemParams, t: &BogoliubovTransform) -> (f64, f64) {
    let ad = p.delta.abs();
    let r = p.gamma / p.kappa;
    let tan2 = t.theta.tan().powi(2);
    let pre = |w: f64| (ad - w).powi(2) / (4.0 * ad * w);
    let np = pre(t.omega_plus) / (1.0 + r * p.omega_m / t.omega_plus * tan2);
    let nm = pre(t.omega_minus) / (1.0 + r * p.omega_m / t.omega_minus / tan2);
    (nm, np)
}

/// All modes at one wavevector.
#[derive(Debug, Clone, Copy)]
pub struct KPoint {
    pub j: usize,
    pub k: f64,
    pub transform: BogoliubovTransform,
    pub minus: ModeData,
    pub plus: ModeData,
    /// Branches (nearly) touch, so the independent-bath picture is not trustworthy.
    pub degenerate: bool,
}

/// Spectrum over the full `N`-point wavevector grid.
#[derive(Debug, Clone)]
pub struct PolaritonSpectrum {
    pub params: SystemParams,
    pub points: Vec<KPoint>,
}

impl PolaritonSpectrum {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validated()?;
        let n = params.n_cells;
        let mut points = Vec::with_capacity(n);
        for j in 1..=n {
            let (c, s) = cos_sin(j, n);
            let (gk, phi) = coupling_from_cos_sin(params, c, s);
            let k = 2.0 * PI * j as f64 / n as f64;
            let t = BogoliubovTransform::new(params.omega_m, params.delta, k, gk, phi)?;
            let (km, kp) = damping_rates(params, &t);
            let (nm, np) = occupations(params, &t);
            let degenerate = (t.omega_plus - t.omega_minus) <= 1e-9 * params.omega_m;
            points.push(KPoint {
                j,
                k,
                transform: t,
                minus: ModeData { omega: t.omega_minus, kappa: km, n_occ: nm, t_eff: effective_temperature(t.omega_minus, nm) },
                plus: ModeData { omega: t.omega_plus, kappa: kp, n_occ: np, t_eff: effective_temperature(t.omega_plus, np) },
                degenerate,
            });
        }
        Ok(PolaritonSpectrum { params: *params, points })
    }

    pub fn n_cells(&self) -> usize {
        self.params.n_cells
    }

    pub fn mode(&self, m: ModeIndex) -> &ModeData {
        let pt = &self.points[m.j - 1];
        match m.branch {
            Branch::Minus => &pt.minus,
            Branch::Plus => &pt.plus,
        }
    }

    pub fn transform(&self, j: usize) -> &BogoliubovTransform {
        &self.points[j - 1].transform
    }

    pub fn omega(&self, m: ModeIndex) -> f64 {
        self.mode(m).omega
    }

    pub fn kappa(&self, m: ModeIndex) -> f64 {
        self.mode(m).kappa
    }

    pub fn n_occ(&self, m: ModeIndex) -> f64 {
        self.mode(m).n_occ
    }

    pub fn modes(&self) -> impl Iterator<Item = (ModeIndex, &ModeData)> {
        self.points.iter().flat_map(|p| {
            [
                (ModeIndex { branch: Branch::Minus, j: p.j }, &p.minus),
                (ModeIndex { branch: Branch::Plus, j: p.j }, &p.plus),
            ]
        })
    }

    /// Highest polariton frequency, sets the default spectral window.
    pub fn max_frequency(&self) -> f64 {
        self.points.iter().map(|p| p.plus.omega).fold(0.0, f64::max)
    }
}

/// Bare retarded, advanced and Keldysh functions of one polariton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTriple {
    pub retarded: Complex64,
    pub advanced: Complex64,
    pub keldysh: Complex64,
}

pub fn bare_retarded(m: &ModeData, omega: f64) -> Complex64 {
    Complex64::new(omega - m.omega, 0.5 * m.kappa).inv()
}

pub fn bare_green_functions(m: &ModeData, omega: f64) -> GreenTriple {
    let r = bare_retarded(m, omega);
    GreenTriple { retarded: r, advanced: r.conj(), keldysh: Complex64::new(0.0, 2.0 * (2.0 * m.n_occ + 1.0) * r.im) }
}

/// Cavity propagator assembled from arbitrary polariton propagators.
pub fn cavity_green_with<F>(spec: &PolaritonSpectrum, omega: f64, prop: F) -> Complex64
where
    F: Fn(ModeIndex, f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for pt in &spec.points {
        let v = &pt.transform.v[1];
        let m = ModeIndex { branch: Branch::Minus, j: pt.j };
        let p = ModeIndex { branch: Branch::Plus, j: pt.j };
        acc += prop(m, omega) * v[0].norm_sqr()
            + prop(p, omega) * v[1].norm_sqr()
            + prop(m, -omega).conj() * v[2].norm_sqr()
            + prop(p, -omega).conj() * v[3].norm_sqr();
    }
    acc / spec.n_cells() as f64
}

pub fn linear_cavity_green(spec: &PolaritonSpectrum, omega: f64) -> Complex64 {
    cavity_green_with(spec, omega, |m, w| bare_retarded(spec.mode(m), w))
}

/// Linear cavity density of states.
pub fn linear_cavity_dos(spec: &PolaritonSpectrum, omega: f64) -> f64 {
    -linear_cavity_green(spec, omega).im / PI
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(delta: f64, gp: f64, gm: f64) -> SystemParams {
        SystemParams::from_gpm(delta, gp, gm).with_damping(0.1, 1e-5)
    }

    #[test]
    fn coupling_at_two_cell_points() {
        let q = p(-1.5, 0.4, 0.2);
        let (g2pi, phi) = many_photon_coupling(&q, 2.0 * PI);
        assert!((g2pi - 0.4).abs() < 1e-14 && phi.abs() < 1e-14);
        let (gpi, _) = many_photon_coupling(&q, PI);
        assert!((gpi - 0.2).abs() < 1e-14);
        let single = SystemParams { g1_dressed: 0.3, g2_dressed: 0.0, ..q };
        assert_eq!(many_photon_coupling(&single, 1.234).0, 0.3);
    }

    #[test]
    fn decoupled_frequencies() {
        let (wm, wp) = polariton_frequencies(1.0, -1.5, 0.0).unwrap();
        assert_eq!((wm, wp), (1.0, 1.5));
        let (wm, wp) = polariton_frequencies(1.0, -1.0, 0.0).unwrap();
        assert_eq!((wm, wp), (1.0, 1.0));
    }

    #[test]
    fn frequencies_unstable_past_threshold() {
        assert!(polariton_frequencies(1.0, -1.5, 0.62).is_err());
    }

    #[test]
    fn mixing_angle_limits() {
        assert!((mixing_angle(1.0, -1.0, 0.3) - PI / 4.0).abs() < 1e-15);
        assert!(mixing_angle(1.0, -2.0, 1e-9) < 1e-8);
    }

    #[test]
    fn identity_limit() {
        let t = BogoliubovTransform::new(1.0, -1.5, 0.0, 0.0, 0.0).unwrap();
        assert!((t.at(1, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(t.at(1, 3).norm() < 1e-15);
        assert!((t.at(2, 2) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn damping_forms_agree_and_mixed_limit() {
        let q = SystemParams::from_gpm(-1.0, 0.3, 0.2).with_damping(0.1, 1e-9);
        let s = PolaritonSpectrum::new(&q).unwrap();
        for pt in &s.points {
            let a = damping_rates(&q, &pt.transform);
            let b = damping_rates_theta(&q, &pt.transform);
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
            assert!((a.0 - 0.05).abs() < 1e-6 && (a.1 - 0.05).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_t_occupations_match_theta_form() {
        let q = p(-1.5, 0.4, 0.2);
        let s = PolaritonSpectrum::new(&q).unwrap();
        for pt in &s.points {
            let (a, b) = occupations(&q, &pt.transform);
            let (c, d) = occupations_theta_zero_t(&q, &pt.transform);
            assert!((a - c).abs() < 1e-10 * c.max(1e-300) && (b - d).abs() < 1e-10 * d.max(1e-300));
        }
    }

    #[test]
    fn plus_branch_empty_when_decoupled() {
        let q = SystemParams { g1_dressed: 1e-7, g2_dressed: 0.0, delta: -2.0, ..Default::default() };
        let s = PolaritonSpectrum::new(&q).unwrap();
        assert!(s.n_occ(ModeIndex::PLUS_2PI) < 1e-12);
    }

    #[test]
    fn effective_temperature_inverts_bose() {
        let t = effective_temperature(0.7, 0.3);
        assert!((bose(0.7, t) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn on_resonance_green() {
        let m = ModeData { omega: 0.5, kappa: 0.02, n_occ: 0.1, t_eff: 0.0 };
        let g = bare_green_functions(&m, 0.5);
        assert!((g.retarded - Complex64::new(0.0, -100.0)).norm() < 1e-10);
        assert!(g.advanced == g.retarded.conj());
        assert!((g.keldysh - Complex64::new(0.0, 2.0 * 1.2 * -100.0)).norm() < 1e-9);
    }

    #[test]
    fn bare_cavity_is_single_lorentzian() {
        let q = SystemParams { g1_dressed: 0.0, g2_dressed: 0.0, delta: -1.5, kappa: 0.1, ..Default::default() };
        let s = PolaritonSpectrum::new(&q).unwrap();
        for w in [1.2, 1.45, 1.5, 1.6] {
            let expect = 0.05 / PI / ((w - 1.5f64).powi(2) + 0.0025);
            assert!((linear_cavity_dos(&s, w) - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn labels() {
        assert_eq!(ModeIndex::MINUS_2PI.label(2), "(-,2pi)");
        assert_eq!(ModeIndex::PLUS_PI.label(2), "(+,pi)");
        assert_eq!(ModeIndex::PLUS_2PI.slot(), 3);
    }
}
