//! Physical inputs, their validation and the instability threshold.

use crate::{Error, Result};

/// All physical inputs of the ring. Energies share one unit (normally `omega_m`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega_m: f64,
    /// Detuning of the drives from the cavity, must be negative.
    pub delta: f64,
    pub kappa: f64,
    pub gamma: f64,
    /// Dressed intra-cell coupling.
    pub g1_dressed: f64,
    /// Dressed inter-cell coupling, may be negative.
    pub g2_dressed: f64,
    pub g1_bare: f64,
    pub g2_bare: f64,
    /// Bath temperature in energy units.
    pub temperature: f64,
    pub n_cells: usize,
    /// Part of `kappa` due to the input/output port.
    pub kappa_cp: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            omega_m: 1.0,
            delta: -1.5,
            kappa: 0.1,
            gamma: 1e-5,
            g1_dressed: 0.3,
            g2_dressed: 0.1,
            g1_bare: 0.0,
            g2_bare: 0.0,
            temperature: 0.0,
            n_cells: 2,
            kappa_cp: 0.01,
        }
    }
}

/// A single violated invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Sums, differences and the distance to the instability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCouplings {
    pub g_plus: f64,
    pub g_minus: f64,
    pub bare_plus: f64,
    pub bare_minus: f64,
    pub g_cri: f64,
    pub lambda: f64,
}

/// `sqrt(|delta| omega_m) / 2`.
pub fn critical_coupling(omega_m: f64, delta: f64) -> f64 {
    (delta.abs() * omega_m).sqrt() / 2.0
}

impl SystemParams {
    /// Builds a two-cell parameter set from `G_+` and `G_-`.
    pub fn from_gpm(delta: f64, g_plus: f64, g_minus: f64) -> Self {
        SystemParams {
            delta,
            g1_dressed: 0.5 * (g_plus + g_minus),
            g2_dressed: 0.5 * (g_plus - g_minus),
            ..Default::default()
        }
    }

    /// Sets `g1_bare` and derives `g2_bare` from the dressed ratio.
    pub fn with_bare_g1(mut self, g1: f64) -> Self {
        self.g1_bare = g1;
        self.g2_bare = if self.g1_dressed != 0.0 {
            g1 * self.g2_dressed / self.g1_dressed
        } else {
            0.0
        };
        self
    }

    pub fn with_damping(mut self, kappa: f64, gamma: f64) -> Self {
        self.kappa = kappa;
        self.gamma = gamma;
        self
    }

    pub fn g_plus(&self) -> f64 {
        self.g1_dressed + self.g2_dressed
    }

    pub fn g_minus(&self) -> f64 {
        self.g1_dressed - self.g2_dressed
    }

    pub fn g_cri(&self) -> f64 {
        critical_coupling(self.omega_m, self.delta)
    }

    pub fn derived(&self) -> DerivedCouplings {
        let g_cri = self.g_cri();
        DerivedCouplings {
            g_plus: self.g_plus(),
            g_minus: self.g_minus(),
            bare_plus: self.g1_bare + self.g2_bare,
            bare_minus: self.g1_bare - self.g2_bare,
            g_cri,
            lambda: self.g_minus() / g_cri,
        }
    }

    /// Every violated invariant; an empty list means the set is usable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |field, message: &str| {
            out.push(Violation { field, message: message.to_string() })
        };
        let all = [
            self.omega_m, self.delta, self.kappa, self.gamma, self.g1_dressed, self.g2_dressed,
            self.g1_bare, self.g2_bare, self.temperature, self.kappa_cp,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            push("params", "all values must be finite");
        }
        if !(self.delta < 0.0) {
            push("delta", "delta must be negative");
        }
        if !(self.omega_m > 0.0) {
            push("omega_m", "omega_m must be positive");
        }
        if !(self.kappa > 0.0) {
            push("kappa", "kappa must be positive");
        }
        if !(self.gamma > 0.0) {
            push("gamma", "gamma must be positive");
        }
        if self.n_cells < 2 || !self.n_cells.is_multiple_of(2) {
            push("n_cells", "N must be even and at least 2");
        }
        if !(self.g1_dressed >= self.g2_dressed.abs()) {
            push("g2_dressed", "G1 ≥ |G2| required");
        }
        if self.g1_bare != 0.0 && self.g2_bare != 0.0 {
            let lhs = self.g1_bare * self.g2_dressed;
            let rhs = self.g2_bare * self.g1_dressed;
            if (lhs - rhs).abs() > 1e-9 * lhs.abs().max(rhs.abs()) {
                push("g2_bare", "g1/g2 must equal G1/G2");
            }
        }
        if !(self.kappa_cp >= 0.0 && self.kappa_cp <= self.kappa) {
            push("kappa_cp", "kappa_cp must lie in [0, kappa]");
        }
        if !(self.temperature >= 0.0) {
            push("temperature", "temperature must be non-negative");
        }
        out
    }

    pub fn validated(&self) -> Result<&Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::Invalid(msg.join("; ")))
        }
    }

    /// Damping-free stability: both `G_+` and `G_-` strictly below `G_cri`.
    pub fn is_stable(&self) -> bool {
        let gc = self.g_cri();
        self.g_plus().abs() < gc && self.g_minus().abs() < gc
    }

    pub fn stability_check(&self) -> Result<()> {
        if self.is_stable() {
            Ok(())
        } else {
            Err(Error::Unstable(format!(
                "G+ = {:.6}, G- = {:.6} not below G_cri = {:.6}",
                self.g_plus(),
                self.g_minus(),
                self.g_cri()
            )))
        }
    }
}
