//! The five resonant decay channels of the two-cell ring, the closed-form
//! resonant `G_+`, their allowed regions and residual checks.

use crate::params::{critical_coupling, SystemParams};
use crate::polariton::{polariton_frequencies, Branch, ModeIndex};
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    A,
    B,
    C,
    D,
    E,
}

impl Process {
    pub const ALL: [Process; 5] = [Process::A, Process::B, Process::C, Process::D, Process::E];

    pub fn label(self) -> char {
        match self {
            Process::A => 'a',
            Process::B => 'b',
            Process::C => 'c',
            Process::D => 'd',
            Process::E => 'e',
        }
    }

    pub fn from_label(c: char) -> Option<Process> {
        Process::ALL.into_iter().find(|p| p.label() == c.to_ascii_lowercase())
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Decaying mode and its two products.
    pub fn modes(self) -> (ModeIndex, [ModeIndex; 2]) {
        use ModeIndex as M;
        match self {
            Process::A => (M::PLUS_2PI, [M::MINUS_PI, M::MINUS_PI]),
            Process::B => (M::PLUS_2PI, [M::MINUS_2PI, M::MINUS_2PI]),
            Process::C => (M::PLUS_PI, [M::MINUS_PI, M::MINUS_2PI]),
            Process::D => (M::PLUS_PI, [M::PLUS_2PI, M::MINUS_PI]),
            Process::E => (M::MINUS_2PI, [M::MINUS_PI, M::MINUS_PI]),
        }
    }

    /// Both products are the same polariton.
    pub fn identical_products(self) -> bool {
        let (_, f) = self.modes();
        f[0] == f[1]
    }
}

/// Closed interval of `G_-` where a process can be tuned to resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllowedRegion {
    pub process: Process,
    pub delta: f64,
    pub g_minus_min: f64,
    pub g_minus_max: f64,
}

impl AllowedRegion {
    pub fn contains(&self, g_minus: f64) -> bool {
        g_minus >= self.g_minus_min && g_minus <= self.g_minus_max
    }
}

fn freq(omega_m: f64, delta: f64, g: f64) -> Option<(f64, f64)> {
    polariton_frequencies(omega_m, delta, g).ok()
}

/// Energy mismatch `ω_initial − ω_product1 − ω_product2` at given `G_±`.
pub fn residual_at(process: Process, omega_m: f64, delta: f64, g_minus: f64, g_plus: f64) -> Option<f64> {
    let pi = freq(omega_m, delta, g_minus)?;
    let tp = freq(omega_m, delta, g_plus)?;
    let w = |m: ModeIndex| {
        let pair = if m.j == 1 { pi } else { tp };
        match m.branch {
            Branch::Minus => pair.0,
            Branch::Plus => pair.1,
        }
    };
    let (i, f) = process.modes();
    Some(w(i) - w(f[0]) - w(f[1]))
}

/// Residual of the resonance condition for a full parameter set.
pub fn resonance_residual(p: &SystemParams, process: Process) -> Option<f64> {
    residual_at(process, p.omega_m, p.delta, p.g_minus(), p.g_plus())
}

fn lower_edge_e(omega_m: f64, delta: f64) -> f64 {
    let ad = delta.abs();
    if delta < -omega_m {
        (3.0 * omega_m / (16.0 * ad) * (ad * ad - omega_m * omega_m / 4.0)).sqrt()
    } else {
        (3.0 * ad / (16.0 * omega_m) * (omega_m * omega_m - ad * ad / 4.0)).max(0.0).sqrt()
    }
}

fn upper_edge_a(omega_m: f64, delta: f64) -> f64 {
    let ad = delta.abs();
    if delta < -omega_m {
        (3.0 * ad / (16.0 * omega_m) * (omega_m * omega_m - ad * ad / 4.0)).max(0.0).sqrt()
    } else {
        (3.0 * omega_m / (16.0 * ad) * (ad * ad - omega_m * omega_m / 4.0)).max(0.0).sqrt()
    }
}

fn lower_edge_a(omega_m: f64, delta: f64) -> f64 {
    let (d2, w2) = (delta * delta, omega_m * omega_m);
    let arg = (10.0 * d2 * w2 - 3.0 * d2 * d2 - 3.0 * w2 * w2) / (delta.abs() * omega_m);
    if arg > 0.0 {
        arg.sqrt() / 8.0
    } else {
        0.0
    }
}

/// Detuning window of the inter-branch processes (a), (b), (c).
fn inter_branch_window(omega_m: f64, delta: f64) -> bool {
    delta > -2.0 * omega_m && delta < -0.5 * omega_m
}

/// `G_+` for (a) and (e) before branch selection, with `x = 4ω_{-,π}^2`.
fn gplus_ae(omega_m: f64, delta: f64, g_minus: f64) -> Option<(f64, f64)> {
    let (wm, _) = freq(omega_m, delta, g_minus)?;
    let x = 4.0 * wm * wm;
    let prod = (wm * wm - omega_m * omega_m / 4.0) * (wm * wm - delta * delta / 4.0);
    if prod < 0.0 {
        return None;
    }
    Some((2.0 * (prod / (delta.abs() * omega_m)).sqrt(), x))
}

pub fn gplus_b(omega_m: f64, delta: f64) -> Option<f64> {
    let (d2, w2) = (delta * delta, omega_m * omega_m);
    let arg = (17.0 * d2 * w2 - 4.0 * (d2 * d2 + w2 * w2)) / (delta.abs() * omega_m);
    if arg < 0.0 {
        None
    } else {
        Some(arg.sqrt() / 10.0)
    }
}

/// Shared (c)/(d) formula. Returns `G_+` and the sign that tells which
/// branch at `2π` closes the resonance (negative: lower, i.e. (c)).
fn gplus_cd(omega_m: f64, delta: f64, g_minus: f64) -> Option<(f64, f64)> {
    let ad = delta.abs();
    let r2 = 1.0 - 4.0 * g_minus * g_minus / (ad * omega_m);
    if r2 < 0.0 {
        return None;
    }
    let r = r2.sqrt();
    let mean = 0.5 * (delta * delta + omega_m * omega_m);
    let g2 = (5.0 * ad * omega_m - 16.0 * g_minus * g_minus) / 4.0 - mean * r;
    if g2 < 0.0 {
        return None;
    }
    Some((g2.sqrt(), mean - 2.0 * ad * omega_m * r))
}

/// Raw closed-form value on the process's own branch, ignoring region edges.
fn formula(process: Process, omega_m: f64, delta: f64, g_minus: f64) -> Option<f64> {
    match process {
        Process::A | Process::E => {
            let (g, x) = gplus_ae(omega_m, delta, g_minus)?;
            let (d2, w2) = (delta * delta, omega_m * omega_m);
            let ok = if process == Process::A { x >= d2.max(w2) } else { x <= d2.min(w2) };
            ok.then_some(g)
        }
        Process::B => gplus_b(omega_m, delta),
        Process::C | Process::D => {
            let (g, s) = gplus_cd(omega_m, delta, g_minus)?;
            let ok = if process == Process::C { s <= 0.0 } else { s >= 0.0 };
            ok.then_some(g)
        }
    }
}

/// `G_-` interval where `process` can be made resonant at this detuning.
pub fn allowed_region(process: Process, omega_m: f64, delta: f64) -> Option<AllowedRegion> {
    if !(delta < 0.0) {
        return None;
    }
    let gc = critical_coupling(omega_m, delta);
    let (lo, hi) = match process {
        Process::A => {
            if !inter_branch_window(omega_m, delta) {
                return None;
            }
            (lower_edge_a(omega_m, delta), upper_edge_a(omega_m, delta))
        }
        Process::B => {
            if !inter_branch_window(omega_m, delta) {
                return None;
            }
            (0.0, gc)
        }
        Process::C => {
            if !inter_branch_window(omega_m, delta) {
                return None;
            }
            let hi = 2.0 * upper_edge_a(omega_m, delta) / 3f64.sqrt();
            (lower_edge_c(omega_m, delta, hi)?, hi)
        }
        Process::D => (2.0 * lower_edge_e(omega_m, delta) / 3f64.sqrt(), gc),
        Process::E => (lower_edge_e(omega_m, delta), gc),
    };
    if hi > lo {
        Some(AllowedRegion { process, delta, g_minus_min: lo, g_minus_max: hi.min(gc) })
    } else {
        None
    }
}

/// Smallest `G_-` at which the (c) formula is real and on its branch.
fn lower_edge_c(omega_m: f64, delta: f64, hi: f64) -> Option<f64> {
    let ok = |g: f64| formula(Process::C, omega_m, delta, g).is_some();
    if ok(0.0) {
        return Some(0.0);
    }
    let n = 400;
    let first = (1..=n).map(|i| hi * i as f64 / n as f64).find(|&g| ok(g))?;
    let prev = first - hi / n as f64;
    let f = |g: f64| if ok(g) { 1.0 } else { -1.0 };
    roots::bisect(f, prev, first, 1e-14 * hi.max(1e-300)).ok().map(|g| g.min(first))
}

/// Resonant `G_+` for `process` at `(delta, g_minus)`, or `None` if the
/// point lies outside the process's allowed region.
pub fn resonant_gplus(process: Process, omega_m: f64, delta: f64, g_minus: f64) -> Option<f64> {
    let region = allowed_region(process, omega_m, delta)?;
    let gc = critical_coupling(omega_m, delta);
    if !(g_minus >= 0.0 && g_minus < gc && region.contains(g_minus)) {
        return None;
    }
    let g = formula(process, omega_m, delta, g_minus)?;
    (g >= 0.0 && g < gc).then_some(g)
}

/// Reference root of the resonance residual in `G_+` (bisection), closest
/// to `near` when several exist. Used for cross-checks.
pub fn residual_root(process: Process, omega_m: f64, delta: f64, g_minus: f64, near: f64) -> Option<f64> {
    let gc = critical_coupling(omega_m, delta);
    let top = gc * (1.0 - 1e-12);
    let f = |gp: f64| residual_at(process, omega_m, delta, g_minus, gp).unwrap_or(f64::NAN);
    let brackets = roots::sign_changes(f, 0.0, top, 2000);
    brackets
        .into_iter()
        .filter_map(|(a, b)| roots::bisect(f, a, b, 1e-15).ok())
        .min_by(|x, y| (x - near).abs().total_cmp(&(y - near).abs()))
}

/// Which of the two kinematically allowed but empty channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtraProcess {
    /// `ω_{+,2π} = 2 ω_{+,π}`
    DoublePlus,
    /// `ω_{+,2π} = ω_{+,π} + ω_{-,π}`
    PlusPlusMinus,
}

/// Outcome of the scan for the two extra channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMeasureReport {
    pub samples: usize,
    /// `(delta, g_minus, g_plus, which)` where a solution was found.
    pub counterexamples: Vec<(f64, f64, f64, ExtraProcess)>,
    /// Smallest `|residual|` seen across the scan.
    pub min_abs_residual: f64,
}

fn extra_residual(which: ExtraProcess, omega_m: f64, delta: f64, gm: f64, gp: f64) -> Option<f64> {
    let (pm, pp) = freq(omega_m, delta, gm)?;
    let (_, tp) = freq(omega_m, delta, gp)?;
    Some(match which {
        ExtraProcess::DoublePlus => tp - 2.0 * pp,
        ExtraProcess::PlusPlusMinus => tp - pp - pm,
    })
}

/// Scans `n_delta × n_gminus` stable points, each with a dense `G_+` sweep,
/// for solutions of the two extra channels within `tol`.
pub fn zero_measure_check(omega_m: f64, delta_range: (f64, f64), n_delta: usize, n_gminus: usize, tol: f64) -> ZeroMeasureReport {
    let cells: Vec<(f64, f64)> = (0..n_delta)
        .flat_map(|i| {
            let d = delta_range.0 + (delta_range.1 - delta_range.0) * (i as f64 + 0.5) / n_delta as f64;
            let gc = critical_coupling(omega_m, d);
            (0..n_gminus).map(move |j| (d, gc * (j as f64 + 0.5) / n_gminus as f64))
        })
        .collect();
    let per_cell = crate::par::map_range(cells.len(), |idx| {
        let (d, gm) = cells[idx];
        let gc = critical_coupling(omega_m, d);
        let mut found = Vec::new();
        let mut best = f64::INFINITY;
        for which in [ExtraProcess::DoublePlus, ExtraProcess::PlusPlusMinus] {
            let m = 200;
            let mut prev: Option<f64> = None;
            for s in 0..m {
                // skip the decoupled point G_+ = 0
                let gp = gc * (s as f64 + 0.5) / m as f64;
                let Some(r) = extra_residual(which, omega_m, d, gm, gp) else { continue };
                best = best.min(r.abs());
                if r.abs() < tol || prev.is_some_and(|q| q.signum() != r.signum()) {
                    found.push((d, gm, gp, which));
                    break;
                }
                prev = Some(r);
            }
        }
        (found, best)
    });
    let mut report = ZeroMeasureReport { samples: cells.len(), counterexamples: Vec::new(), min_abs_residual: f64::INFINITY };
    for (f, b) in per_cell {
        report.counterexamples.extend(f);
        report.min_abs_residual = report.min_abs_residual.min(b);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig6_value() {
        let g = resonant_gplus(Process::E, 1.0, -8.0, 1.35).unwrap();
        assert!((g - 1.137).abs() < 5e-4, "{g}");
    }

    #[test]
    fn b_independent_of_gminus() {
        let a = resonant_gplus(Process::B, 1.0, -0.8, 0.1).unwrap();
        let b = resonant_gplus(Process::B, 1.0, -0.8, 0.4).unwrap();
        assert_eq!(a, b);
        let r = residual_at(Process::B, 1.0, -0.8, 0.3, a).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn e_edge_at_unit_detuning() {
        let r = allowed_region(Process::E, 1.0, -1.0).unwrap();
        assert!((r.g_minus_min - 0.375).abs() < 1e-15);
        // both pieces of the edge formula meet here
        let a = (3.0f64 / 16.0 * (1.0 - 0.25)).sqrt();
        assert!((a - 0.375).abs() < 1e-15);
        // at the edge G_+ sits at zero, i.e. on the boundary of validity
        let g = resonant_gplus(Process::E, 1.0, -1.0, 0.375).unwrap();
        assert!(g.abs() < 1e-7);
        assert!(residual_at(Process::E, 1.0, -1.0, 0.375, g).unwrap().abs() < 1e-9);
    }

    #[test]
    fn e_edge_large_detuning() {
        let d = -1e6;
        let r = allowed_region(Process::E, 1.0, d).unwrap();
        let ratio = r.g_minus_min / critical_coupling(1.0, d);
        assert!((ratio - 3f64.sqrt() / 2.0).abs() < 1e-6);
    }

    #[test]
    fn inter_branch_windows() {
        for p in [Process::A, Process::B, Process::C] {
            assert!(allowed_region(p, 1.0, -2.5).is_none());
            assert!(allowed_region(p, 1.0, -0.3).is_none());
        }
        assert!(allowed_region(Process::B, 1.0, -0.8).is_some());
        assert!(allowed_region(Process::D, 1.0, -5.0).is_some());
    }

    #[test]
    fn decoupled_cells_resonate_together() {
        let gm = 0.3;
        let gp = resonant_gplus(Process::A, 1.0, -1.2, gm).unwrap();
        // find the G_+ = G_- point by looking at the b formula instead
        let gb = gplus_b(1.0, -1.2).unwrap();
        for p in [Process::A, Process::B, Process::C] {
            let r = residual_at(p, 1.0, -1.2, gb, gb).unwrap();
            assert!(r.abs() < 1e-12, "{p:?} {r}");
        }
        assert!(gp > 0.0);
    }

    #[test]
    fn labels_round_trip() {
        for p in Process::ALL {
            assert_eq!(Process::from_label(p.label()), Some(p));
        }
        assert_eq!(Process::from_label('x'), None);
    }
}
