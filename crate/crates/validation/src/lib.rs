//! Shared working points and the verdict printer for the acceptance suite.

use optoring::resonance::resonant_gplus;
use optoring::{Process, SystemParams};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::time::{Duration, Instant};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ring sitting on resonance (e) at `(delta, g_minus)`.
pub fn on_resonance_e(delta: f64, g_minus: f64, kappa: f64, g1: f64) -> SystemParams {
    let gp = resonant_gplus(Process::E, 1.0, delta, g_minus).expect("point inside region (e)");
    SystemParams::from_gpm(delta, gp, g_minus).with_damping(kappa, 1e-4 * kappa).with_bare_g1(g1)
}

/// Moderate detuning on resonance (e): Δ = −1.5, G₋ = 0.52, κ = 0.1, g₁/κ = 2e-3.
pub fn moderate_detuning() -> SystemParams {
    on_resonance_e(-1.5, 0.52, 0.1, 2e-4)
}

/// Large detuning near resonance (e): Δ = −8, G₋ = 1.35, G₊ = 1.137.
pub fn large_detuning() -> SystemParams {
    SystemParams { kappa_cp: 0.01, ..SystemParams::from_gpm(-8.0, 1.137, 1.35).with_damping(0.1, 1e-5).with_bare_g1(2e-4) }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// One acceptance verdict. Written straight to stderr so it shows even
/// when the harness captures output.
pub struct Verdict {
    pub id: u32,
    pub name: &'static str,
    start: Instant,
    budget: Duration,
    checks: Vec<(String, bool)>,
}

impl Verdict {
    pub fn new(id: u32, name: &'static str, budget_secs: u64) -> Self {
        Verdict { id, name, start: Instant::now(), budget: Duration::from_secs(budget_secs), checks: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, detail: impl Into<String>) -> bool {
        self.checks.push((detail.into(), ok));
        ok
    }

    /// Prints the line and panics with the failed checks, if any.
    pub fn finish(mut self) {
        let t = self.start.elapsed();
        let in_time = t <= self.budget;
        self.checks.push((format!("runtime {:.2}s (budget {}s)", t.as_secs_f64(), self.budget.as_secs()), in_time));
        let pass = self.checks.iter().all(|c| c.1);
        let body: Vec<String> = self.checks.iter().map(|(d, ok)| if *ok { d.clone() } else { format!("[x] {d}") }).collect();
        let line = format!("\ncriterion {:>2} {} {}: {}\n", self.id, if pass { "PASS" } else { "FAIL" }, self.name, body.join("; "));
        let _ = std::io::stderr().write_all(line.as_bytes());
        let failed: Vec<&String> = self.checks.iter().filter(|c| !c.1).map(|c| &c.0).collect();
        assert!(pass, "criterion {} failed: {:?}", self.id, failed);
    }
}
