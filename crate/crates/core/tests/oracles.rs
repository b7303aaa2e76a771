//! Independent numerical checks of derived quantities.

mod common;

use common::{moderate_detuning, on_resonance_e, rel};
use optoring::device::{solve_symmetric_configuration, DEFAULT_GUESS, DEFAULT_TRANSMISSION};
use optoring::keldysh::asymptotics::asymptotic_bundle;
use optoring::keldysh::self_energy::{self_energy_term, total_self_energy};
use optoring::keldysh::{NonlinearRing, SelfEnergyModel};
use optoring::lindblad::{auto_truncate, oracle_cavity_dos, ReducedModel};
use optoring::polariton::linear_cavity_dos;
use optoring::quad::{integrate_real, QuadOptions};
use optoring::resonance::resonant_gplus;
use optoring::{ModeIndex, PolaritonSpectrum, Process, SystemParams};

fn peak_frequencies(spec: &PolaritonSpectrum) -> Vec<f64> {
    spec.modes().flat_map(|(_, m)| [m.omega, -m.omega]).collect()
}

#[test]
fn nonlinear_dos_sum_rule() {
    let ring = NonlinearRing::new(&on_resonance_e(-1.5, 0.52, 0.1, 2e-3)).unwrap();
    let mut bp = peak_frequencies(&ring.spec);
    for (_, m) in ring.spec.modes() {
        bp.extend([2.0 * m.omega, -2.0 * m.omega]);
    }
    let opts = QuadOptions { rel_tol: 1e-9, abs_tol: 1e-12, max_intervals: 100_000 };
    let (w, _) = integrate_real(|x| ring.dos(x), f64::NEG_INFINITY, f64::INFINITY, &bp, opts);
    assert!((w - 1.0).abs() < 1e-3, "∫ρ = {w}");
    let (w0, _) = integrate_real(|x| ring.linear_dos(x), f64::NEG_INFINITY, f64::INFINITY, &bp, opts);
    assert!((w0 - 1.0).abs() < 1e-6, "∫ρ₀ = {w0}");
}

#[test]
fn vertex_e_matches_asymptotics() {
    let (delta, lambda) = (-8.0, 0.95);
    let gc = 8f64.sqrt() / 2.0;
    let p = on_resonance_e(delta, lambda * gc, 0.1, 2e-4);
    let ring = NonlinearRing::new(&p).unwrap();
    let b = asymptotic_bundle(1.0, delta, lambda, 0.1, 1e-5, 2e-4);
    assert!(rel(ring.couplings.e.abs(), b.g_e) < 0.15, "{} vs {}", ring.couplings.e, b.g_e);
    // resonant G₊ against its large-|Δ| form √(4λ²−3) G_cri
    assert!(rel(p.g_plus(), (4.0 * lambda * lambda - 3.0f64).sqrt() * gc) < 0.15);
    assert!(rel(ring.spec.omega(ModeIndex::MINUS_PI), (1.0 - lambda * lambda).sqrt()) < 0.15);
}

#[test]
fn nonresonant_channels_small_at_moderate_detuning() {
    let ring = NonlinearRing::new(&moderate_detuning()).unwrap();
    let w = ring.spec.omega(ModeIndex::MINUS_2PI);
    let term = |p| self_energy_term(&ring.spec, &ring.couplings, ModeIndex::MINUS_2PI, p, w).unwrap().norm();
    let e = term(Process::E);
    for p in [Process::B, Process::C] {
        assert!(term(p) < 0.05 * e, "({}) {:.2e} vs (e) {e:.2e}", p.label(), term(p));
    }
}

/// Off resonance the dressed peak moves by about `Re Σ(ω₀)`.
#[test]
fn pole_shift_follows_real_self_energy() {
    let gp = resonant_gplus(Process::E, 1.0, -1.5, 0.52).unwrap();
    let p = SystemParams::from_gpm(-1.5, gp * 0.8, 0.52).with_damping(0.01, 1e-6).with_bare_g1(5e-3);
    let ring = NonlinearRing::new(&p).unwrap();
    let mode = ModeIndex::MINUS_2PI;
    let m = *ring.spec.mode(mode);
    let sigma = total_self_energy(&ring.spec, &ring.couplings, &ring.model, mode, m.omega);
    let n = 200_001;
    let (a, b) = (m.omega - 5.0 * m.kappa, m.omega + 5.0 * m.kappa);
    let peak = (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .max_by(|x, y| (-ring.dressed(mode, *x).im).total_cmp(&(-ring.dressed(mode, *y).im)))
        .unwrap();
    let shift = peak - m.omega;
    assert!(sigma.re.abs() > 5.0 * (b - a) / n as f64, "shift too small to resolve: {}", sigma.re);
    assert!(rel(shift, sigma.re) < 0.05, "shift {shift:.3e}, Re Σ {:.3e}", sigma.re);
}

#[test]
fn strength_tracks_cooperativity() {
    for g1 in [2e-3, 5e-3] {
        let ring = NonlinearRing::with_model(&on_resonance_e(-1.5, 0.52, 0.1, g1), SelfEnergyModel::with_processes(&[Process::E])).unwrap();
        let c = ring.effective_cooperativity();
        // relative drop of the (−,2π) spectral peak
        let w = ring.spec.omega(ModeIndex::MINUS_2PI);
        let m = ring.spec.mode(ModeIndex::MINUS_2PI);
        let drop = 1.0 - ring.dressed(ModeIndex::MINUS_2PI, w).im / (-2.0 / m.kappa);
        assert!(rel(drop, c / (1.0 + c)) < 0.2, "C = {c:.3}, drop {drop:.3}");
        let i_nl = ring.nonlinearity_strength(&ring.default_grid(2001));
        assert!(i_nl > 0.0 && i_nl <= c / (1.0 + c) * 1.2 + 1e-12, "I_nl {i_nl:.3e} vs {:.3e}", c / (1.0 + c));
    }
}

#[test]
fn dos_deviation_scales_as_g1_squared() {
    let dev = |g1: f64| {
        let ring = NonlinearRing::new(&on_resonance_e(-1.5, 0.52, 0.1, g1)).unwrap();
        ring.default_grid(4001).iter().map(|&w| (ring.dos(w) - ring.linear_dos(w)).abs()).fold(0.0, f64::max)
    };
    let r = dev(2e-5) / dev(1e-5);
    assert!((r - 4.0).abs() < 0.02, "ratio {r}");
}

#[test]
fn master_equation_checks() {
    let ring = NonlinearRing::new(&on_resonance_e(-1.5, 0.52, 0.1, 2e-3)).unwrap();
    let m2 = ring.spec.mode(ModeIndex::MINUS_2PI);
    let ws: Vec<f64> = (0..=20).map(|i| m2.omega + m2.kappa * (-1.5 + 3.0 * i as f64 / 20.0)).collect();

    // g = 0 gives back the linear DOS
    let free = ReducedModel { g_e: 0.0, ..ReducedModel::from_spectrum(&ring.spec, &ring.couplings, 2, 12).unwrap() };
    let st = free.steady_state().unwrap();
    let o = oracle_cavity_dos(&ring.spec, &free, &st, &ws).unwrap();
    for (w, d) in ws.iter().zip(&o.dos) {
        assert!(rel(*d, linear_cavity_dos(&ring.spec, *w)) < 1e-6);
    }

    // truncation convergence: the certificate bounds the top-level weight by
    // 1e-4, and the spectrum moves by the same order when the cutoff grows
    let base = ReducedModel::from_spectrum(&ring.spec, &ring.couplings, 2, 2).unwrap();
    let cert = auto_truncate(base, 60).unwrap();
    let a = oracle_cavity_dos(&ring.spec, &cert.model, &cert.steady, &ws).unwrap();
    let bigger = cert.model.with_truncation(cert.model.n_max_1 + 4, cert.model.n_max_2 + 2).unwrap();
    let b = oracle_cavity_dos(&ring.spec, &bigger, &bigger.steady_state().unwrap(), &ws).unwrap();
    for (x, y) in a.dos.iter().zip(&b.dos) {
        assert!(rel(*x, *y) < 1e-3, "{} vs {} at cutoffs {} {}", x, y, cert.model.n_max_1, cert.model.n_max_2);
    }

    // deviation from the free spectrum at the same cutoff grows as g̃²
    let dos_at = |g: f64| {
        let m = ReducedModel { g_e: g, ..cert.model };
        oracle_cavity_dos(&ring.spec, &m, &m.steady_state().unwrap(), &ws).unwrap().dos
    };
    let free_dos = dos_at(0.0);
    let dev = |g: f64| dos_at(g).iter().zip(&free_dos).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let g = ring.couplings.e * 0.1;
    let r = dev(2.0 * g) / dev(g);
    assert!((r - 4.0).abs() < 0.05, "ratio {r}");

    // the (−,2π) line broadens to about κ(1 + C)
    let c = ring.effective_cooperativity();
    let g_at = |w: f64| cert.model.retarded_correlation(&cert.steady, &[w]).unwrap()[0];
    let peak = -g_at(m2.omega).im;
    let broadened = m2.kappa * (1.0 + c);
    assert!(rel(peak, 2.0 / broadened) < 0.1, "peak {peak:.3} vs {:.3}", 2.0 / broadened);
}

#[test]
fn asymptotic_bound_examples() {
    let r = |kappa: f64| {
        // g₁/κ held at 1e-3
        let b = asymptotic_bundle(1.0, -3.0, 0.9, kappa, 1e-4 * kappa, 1e-3 * kappa);
        let want = 9.0 / 32.0 * (1.0 / kappa).powi(4) * 3f64.powi(11) * 1e-6;
        assert!(rel(b.c_eff_bound, want) < 1e-12);
        b.c_eff_bound
    };
    assert!((r(0.1) - 498.0).abs() < 1.0);
    assert!((r(1.0) - 0.0498).abs() < 1e-4);
    let b = asymptotic_bundle(1.0, -8.0, 0.9, 0.1, 1e-5, 2e-4);
    assert!(rel(b.delta_opt, -100.0) < 1e-12);
}

#[test]
fn device_basin() {
    let a = solve_symmetric_configuration(1.0, DEFAULT_TRANSMISSION, DEFAULT_GUESS).unwrap();
    for s in [0.99, 1.01] {
        let g = DEFAULT_GUESS.map(|x| x * s);
        let b = solve_symmetric_configuration(1.0, DEFAULT_TRANSMISSION, g).unwrap();
        assert!((a.k1 - b.k1).abs() < 1e-9 && (a.config.q1 - b.config.q1).abs() < 1e-9, "{s}");
        assert!((a.ratio - b.ratio).abs() < 1e-9);
    }
    assert!((a.g12 - a.g21).abs() < 1e-9 * a.g12.abs());
    assert!((a.g11 - a.g22).abs() < 1e-9 * a.g11.abs());
}
