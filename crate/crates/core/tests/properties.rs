//! Property tests for the structural invariants.

use nalgebra::{Matrix4, Vector4};
use optoring::keldysh::couplings::effective_couplings;
use optoring::keldysh::self_energy::{sigma_1a, sigma_1b, sigma_2a, sigma_2b};
use optoring::keldysh::NonlinearRing;
use optoring::lindblad::ReducedModel;
use optoring::par::{map_range, map_range_seq};
use optoring::polariton::{polariton_frequencies, BogoliubovTransform, ModeData};
use optoring::resonance::{allowed_region, residual_at, resonant_gplus};
use optoring::{Complex64, PolaritonSpectrum, Process, SystemParams};
use proptest::prelude::*;

fn stable_params() -> impl Strategy<Value = SystemParams> {
    (0.3f64..4.0, 0.0f64..0.98, 0.0f64..0.98, prop::sample::select(vec![2usize, 4, 6, 10])).prop_map(|(ad, a, b, n)| {
        let gc = ad.sqrt() / 2.0;
        SystemParams { n_cells: n, ..SystemParams::from_gpm(-ad, a * gc, b * gc).with_damping(0.1, 1e-5) }
    })
}

fn mode() -> impl Strategy<Value = ModeData> {
    (0.1f64..2.0, 1e-3f64..0.3, 0.0f64..2.0).prop_map(|(omega, kappa, n_occ)| ModeData { omega, kappa, n_occ, t_eff: 0.0 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symplectic_metric(ad in 0.2f64..5.0, frac in 0.0f64..0.999, phi in -3.2f64..3.2) {
        let g = frac * ad.sqrt() / 2.0;
        let t = BogoliubovTransform::new(1.0, -ad, 0.0, g, phi).unwrap().full_matrix();
        let eta = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, -1.0)).map(|x| Complex64::new(x, 0.0));
        prop_assert!((t * eta * t.adjoint() - eta).norm() < 1e-9);
    }

    #[test]
    fn frequencies_ordered_and_product(ad in 0.2f64..5.0, frac in 0.0f64..0.999) {
        let g = frac * ad.sqrt() / 2.0;
        let (wm, wp) = polariton_frequencies(1.0, -ad, g).unwrap();
        prop_assert!(0.0 < wm && wm <= wp);
        prop_assert!(((wm * wp).powi(2) - (ad * ad - 4.0 * ad * g * g)).abs() < 1e-10 * ad * ad);
        prop_assert!((wm * wm + wp * wp - (1.0 + ad * ad)).abs() < 1e-10 * (1.0 + ad * ad));
    }

    #[test]
    fn stability_matches_spectrum(ad in 0.3f64..4.0, a in 0.0f64..1.3, b in 0.0f64..1.3) {
        let gc = ad.sqrt() / 2.0;
        let p = SystemParams::from_gpm(-ad, a * gc, b * gc);
        let built = PolaritonSpectrum::new(&p);
        if p.validate().is_empty() {
            prop_assert_eq!(p.is_stable(), built.is_ok());
        }
        prop_assert_eq!(p.is_stable(), a < 1.0 && b < 1.0);
    }

    #[test]
    fn damping_sum(p in stable_params()) {
        let s = PolaritonSpectrum::new(&p).unwrap();
        for pt in &s.points {
            let sum = pt.minus.kappa + pt.plus.kappa;
            prop_assert!(sum >= p.kappa * (1.0 - 1e-12));
            prop_assert!(sum <= p.kappa + p.gamma * 1e3);
            prop_assert!(pt.minus.n_occ >= 0.0 && pt.plus.n_occ >= 0.0);
        }
    }

    #[test]
    fn couplings_linear_in_bare(frac in 0.05f64..0.95, g1 in 1e-5f64..1e-2, s in 0.1f64..10.0) {
        let gm = frac * 1.5f64.sqrt() / 2.0;
        let Some(gp) = resonant_gplus(Process::E, 1.0, -1.5, gm) else { return Ok(()) };
        let p = SystemParams::from_gpm(-1.5, gp, gm);
        let c1 = effective_couplings(&PolaritonSpectrum::new(&p.with_bare_g1(g1)).unwrap()).unwrap();
        let c2 = effective_couplings(&PolaritonSpectrum::new(&p.with_bare_g1(s * g1)).unwrap()).unwrap();
        for q in Process::ALL {
            prop_assert!((c2.get(q) - s * c1.get(q)).abs() <= 1e-12 * (s * c1.get(q)).abs().max(1e-300));
        }
    }

    #[test]
    fn symmetry_factors(g in 1e-5f64..1e-1, mu in mode(), sg in mode(), w in -3.0f64..3.0) {
        prop_assert_eq!(sigma_1b(g, &mu, &mu, w), sigma_1a(g, &mu, w) * 0.5);
        prop_assert_eq!(sigma_2b(g, &mu, &sg, w), sigma_2a(g, &mu, &sg, w) * 0.25);
    }

    #[test]
    fn retarded_self_energies_are_causal(g in 1e-5f64..1e-1, mu in mode(), nu in mode(), w in -3.0f64..3.0) {
        prop_assert!(sigma_1a(g, &mu, w).im <= 0.0);
        prop_assert!(sigma_1b(g, &mu, &nu, w).im <= 0.0);
    }

    #[test]
    fn formulas_zero_the_residual(ad in 0.3f64..4.0, u in 0.02f64..0.98) {
        for q in Process::ALL {
            let Some(r) = allowed_region(q, 1.0, -ad) else { continue };
            let gm = r.g_minus_min + u * (r.g_minus_max - r.g_minus_min);
            if let Some(gp) = resonant_gplus(q, 1.0, -ad, gm) {
                let res = residual_at(q, 1.0, -ad, gm, gp).unwrap();
                prop_assert!(res.abs() < 1e-9, "({}) residual {res}", q.label());
            }
        }
    }

    #[test]
    fn linear_limit_of_nonlinear_dos(frac in 0.1f64..0.95, w in 0.0f64..3.0) {
        let gm = frac * 1.5f64.sqrt() / 2.0;
        let Some(gp) = resonant_gplus(Process::E, 1.0, -1.5, gm) else { return Ok(()) };
        let p = SystemParams::from_gpm(-1.5, gp, gm).with_damping(0.1, 1e-5);
        let ring = NonlinearRing::new(&p).unwrap();
        prop_assert_eq!(ring.dos(w), ring.linear_dos(w));
        let ring = NonlinearRing::new(&p.with_bare_g1(1e-3)).unwrap();
        prop_assert!(ring.dos(w) >= 0.0);
    }

    #[test]
    fn parallel_map_is_order_stable(n in 0usize..500) {
        let f = |i: usize| (i as f64).sqrt().sin();
        prop_assert_eq!(map_range(n, f), map_range_seq(n, f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn steady_state_is_a_density_matrix(g in 0.0f64..0.02, n1 in 0.0f64..0.5, n2 in 0.0f64..0.2) {
        let m = ReducedModel { omega_1: 0.45, omega_2: 0.9, g_e: g, kappa_1: 0.03, kappa_2: 0.01, n_1: n1, n_2: n2, n_max_1: 8, n_max_2: 4 };
        let st = m.steady_state().unwrap();
        prop_assert!((st.trace - 1.0).norm() < 1e-10);
        prop_assert!(st.hermiticity_error < 1e-10);
        prop_assert!(st.min_eigenvalue > -1e-10);
    }
}
