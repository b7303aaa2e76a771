//! Second-order retarded self-energies of the four two-cell polaritons.

use super::couplings::EffectiveCouplings;
use crate::polariton::{bare_retarded, ModeData, ModeIndex, PolaritonSpectrum};
use crate::resonance::Process;
use crate::{Error, Result};
use num_complex::Complex64;

/// Diagram topology: `One*` when the mode is the decaying one, `Two*` when it
/// is a product; `*A` for identical products, `*B` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagramType {
    OneA,
    OneB,
    TwoA,
    TwoB,
}

impl DiagramType {
    pub fn label(self) -> &'static str {
        match self {
            DiagramType::OneA => "1a",
            DiagramType::OneB => "1b",
            DiagramType::TwoA => "2a",
            DiagramType::TwoB => "2b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub process: Process,
    pub mode: ModeIndex,
    pub diagram: DiagramType,
}

/// Classification of every (process, participating mode) pair plus the
/// switches selecting which processes contribute.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfEnergyModel {
    pub rows: Vec<TableRow>,
    pub active: [bool; 5],
}

impl Default for SelfEnergyModel {
    fn default() -> Self {
        SelfEnergyModel { rows: classification(), active: [true; 5] }
    }
}

impl SelfEnergyModel {
    /// Only the listed processes contribute.
    pub fn with_processes(processes: &[Process]) -> Self {
        let mut active = [false; 5];
        for p in processes {
            active[p.index()] = true;
        }
        SelfEnergyModel { rows: classification(), active }
    }

    pub fn is_active(&self, p: Process) -> bool {
        self.active[p.index()]
    }

    pub fn row(&self, mode: ModeIndex, process: Process) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.mode == mode && r.process == process)
    }

    pub fn rows_for(&self, mode: ModeIndex) -> impl Iterator<Item = &TableRow> + '_ {
        self.rows.iter().filter(move |r| r.mode == mode && self.is_active(r.process))
    }
}

/// Derives the table from the process kinematics.
pub fn classification() -> Vec<TableRow> {
    let mut rows = Vec::new();
    for process in Process::ALL {
        let (init, products) = process.modes();
        let same = products[0] == products[1];
        rows.push(TableRow { process, mode: init, diagram: if same { DiagramType::OneA } else { DiagramType::OneB } });
        if same {
            rows.push(TableRow { process, mode: products[0], diagram: DiagramType::TwoA });
        } else {
            for m in products {
                rows.push(TableRow { process, mode: m, diagram: DiagramType::TwoB });
            }
        }
    }
    rows
}

pub fn sigma_1a(g: f64, mu: &ModeData, omega: f64) -> Complex64 {
    Complex64::new(2.0 * g * g * (1.0 + 2.0 * mu.n_occ), 0.0) / Complex64::new(omega - 2.0 * mu.omega, mu.kappa)
}

pub fn sigma_1b(g: f64, mu: &ModeData, nu: &ModeData, omega: f64) -> Complex64 {
    Complex64::new(g * g * (1.0 + (mu.n_occ + nu.n_occ)), 0.0)
        / Complex64::new(omega - (mu.omega + nu.omega), 0.5 * (mu.kappa + nu.kappa))
}

/// Product `mu` of a decay of `sigma` into two copies of `mu`.
pub fn sigma_2a(g: f64, mu: &ModeData, sigma: &ModeData, omega: f64) -> Complex64 {
    Complex64::new(4.0 * g * g * (mu.n_occ - sigma.n_occ), 0.0)
        / Complex64::new(omega - sigma.omega + mu.omega, 0.5 * (sigma.kappa + mu.kappa))
}

/// One product of a decay of `sigma`; `nu` is the other product.
pub fn sigma_2b(g: f64, nu: &ModeData, sigma: &ModeData, omega: f64) -> Complex64 {
    Complex64::new(g * g * (nu.n_occ - sigma.n_occ), 0.0)
        / Complex64::new(omega - sigma.omega + nu.omega, 0.5 * (sigma.kappa + nu.kappa))
}

/// Contribution of `process` to the self-energy of `mode`.
pub fn self_energy_term(
    spec: &PolaritonSpectrum,
    couplings: &EffectiveCouplings,
    mode: ModeIndex,
    process: Process,
    omega: f64,
) -> Result<Complex64> {
    let (init, products) = process.modes();
    let g = couplings.get(process);
    let m = |x: ModeIndex| spec.mode(x);
    if mode == init {
        return Ok(if products[0] == products[1] {
            sigma_1a(g, m(products[0]), omega)
        } else {
            sigma_1b(g, m(products[0]), m(products[1]), omega)
        });
    }
    if products[0] == products[1] && mode == products[0] {
        return Ok(sigma_2a(g, m(mode), m(init), omega));
    }
    if let Some(pos) = products.iter().position(|&x| x == mode) {
        let other = products[1 - pos];
        return Ok(sigma_2b(g, m(other), m(init), omega));
    }
    Err(Error::Invalid(format!("mode {} takes no part in process ({})", mode.label(2), process.label())))
}

/// Sum over the active processes involving `mode`.
pub fn total_self_energy(
    spec: &PolaritonSpectrum,
    couplings: &EffectiveCouplings,
    model: &SelfEnergyModel,
    mode: ModeIndex,
    omega: f64,
) -> Complex64 {
    model
        .rows_for(mode)
        .map(|r| self_energy_term(spec, couplings, mode, r.process, omega).expect("row from table"))
        .sum()
}

/// Dyson-resummed polariton propagator with the second-order self-energy.
pub fn dressed_green_function(
    spec: &PolaritonSpectrum,
    couplings: &EffectiveCouplings,
    model: &SelfEnergyModel,
    mode: ModeIndex,
    omega: f64,
) -> Complex64 {
    let sigma = total_self_energy(spec, couplings, model, mode, omega);
    if sigma == Complex64::new(0.0, 0.0) {
        return bare_retarded(spec.mode(mode), omega);
    }
    let m = spec.mode(mode);
    (Complex64::new(omega - m.omega, 0.5 * m.kappa) - sigma).inv()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polariton::ModeIndex as M;

    #[test]
    fn table_shape() {
        let rows = classification();
        assert_eq!(rows.len(), 12);
        let procs_of = |m: M| rows.iter().filter(|r| r.mode == m).map(|r| r.process.label()).collect::<String>();
        assert_eq!(procs_of(M::PLUS_2PI), "abd");
        assert_eq!(procs_of(M::MINUS_2PI), "bce");
        assert_eq!(procs_of(M::PLUS_PI), "cd");
        assert_eq!(procs_of(M::MINUS_PI), "acde");
        let find = |p, m| rows.iter().find(|r| r.process == p && r.mode == m).unwrap().diagram;
        assert_eq!(find(Process::E, M::MINUS_2PI), DiagramType::OneA);
        assert_eq!(find(Process::E, M::MINUS_PI), DiagramType::TwoA);
        assert_eq!(find(Process::C, M::PLUS_PI), DiagramType::OneB);
        assert_eq!(find(Process::D, M::PLUS_2PI), DiagramType::TwoB);
    }

    #[test]
    fn symmetry_factors_exact() {
        let mu = ModeData { omega: 0.45, kappa: 0.028, n_occ: 0.4, t_eff: 0.0 };
        let sg = ModeData { omega: 0.91, kappa: 0.011, n_occ: 0.06, t_eff: 0.0 };
        for w in [0.3, 0.9, 0.91, 1.7] {
            assert_eq!(sigma_1b(1e-3, &mu, &mu, w), sigma_1a(1e-3, &mu, w) * 0.5);
            assert_eq!(sigma_2b(1e-3, &mu, &sg, w), sigma_2a(1e-3, &mu, &sg, w) * 0.25);
        }
    }

    #[test]
    fn on_resonance_1a() {
        let mu = ModeData { omega: 0.45, kappa: 0.028, n_occ: 0.4, t_eff: 0.0 };
        let g = 1e-3;
        let s = sigma_1a(g, &mu, 0.9);
        let expect = -2.0 * g * g * 1.8 / 0.028;
        assert!(s.re.abs() < 1e-20 && (s.im - expect).abs() < 1e-15);
    }
}
