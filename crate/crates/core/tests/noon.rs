use std::f64::consts::PI;

use cavity_monitor::cavities::*;
use cavity_monitor::oracle::expm_taylor_oracle;
use cavity_monitor::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[test]
fn numeric_amplitudes_match_closed_form() {
    let mut rng = StdRng::seed_from_u64(3);
    for n in [1usize, 2, 10, 20, 100] {
        for omega0 in [0.0, 2.5] {
            let p = CavityParams::new(n, 1.0, omega0).unwrap();
            let h = build_two_cavity_hamiltonian(&p).unwrap();
            for _ in 0..200 {
                let t = rng.random_range(0.0..4.0 * PI);
                let r = report_at(&p, &h, t).unwrap();
                let (c0, cn) = analytic_amplitudes(&p, t);
                assert!((r.c0 - c0).norm() < 1e-9, "N={n} t={t}");
                assert!((r.cn - cn).norm() < 1e-9, "N={n} t={t}");
            }
        }
    }
}

#[test]
fn small_systems_match_taylor_oracle() {
    // independent of the eigensolver
    for n in [1usize, 3, 6] {
        let p = CavityParams::new(n, 1.0, 0.0).unwrap();
        let h = build_two_cavity_hamiltonian(&p).unwrap();
        for t in [0.3, 1.7, 4.0] {
            let u = expm_taylor_oracle(&h, t).unwrap();
            let (c0, cn) = analytic_amplitudes(&p, t);
            assert!((u[(0, 0)] - c0).norm() < 1e-10);
            assert!((u[(n, 0)] - cn).norm() < 1e-10);
        }
    }
}

#[test]
fn single_photon_transfer_phase() {
    let p = CavityParams::new(1, 1.0, 0.0).unwrap();
    let h = build_two_cavity_hamiltonian(&p).unwrap();
    let psi = h.evolve(&initial_state(1), PI).unwrap();
    assert!((psi.amp(1) - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    assert!(psi.amp(0).norm() < 1e-12);
}

#[test]
fn complete_transfer_at_half_period() {
    for n in 1..=12 {
        let p = CavityParams::new(n, 1.0, 0.0).unwrap();
        let h = build_two_cavity_hamiltonian(&p).unwrap();
        let r = report_at(&p, &h, PI).unwrap();
        assert!(r.measures.abs_c0 < 1e-10);
        assert!((r.measures.abs_cn - 1.0).abs() < 1e-10);
        assert!(r.renyi2.abs() < 1e-8);
    }
}

#[test]
fn spectral_weights_are_binomial() {
    for n in 1..=30 {
        let p = CavityParams::new(n, 1.0, 0.0).unwrap();
        let h = build_two_cavity_hamiltonian(&p).unwrap();
        let v = h.eigenvectors();
        for k in 0..=n {
            // energies ascend: E_k = J(k - N/2)
            assert!((h.energies()[k] - (k as f64 - n as f64 / 2.0)).abs() < 1e-9);
            let w = v[(0, k)].powi(2);
            let want = binomial(n, k) / 2f64.powi(n as i32);
            assert!((w - want).abs() < 1e-9, "N={n} k={k}");
            assert!((overlap_initial_eigenstate(n, k).unwrap().powi(2) - want).abs() < 1e-12);
        }
    }
}

#[test]
fn moduli_do_not_depend_on_omega0() {
    for n in [2usize, 5, 9] {
        let scans: Vec<Vec<NoonReport>> = [0.0, 1.0, 5.0]
            .iter()
            .map(|&w| unitary_scan(&CavityParams::new(n, 1.0, w).unwrap(), 12.0, 0.37).unwrap())
            .collect();
        for i in 0..scans[0].len() {
            let a = &scans[0][i].measures;
            for other in &scans[1..] {
                let b = &other[i].measures;
                assert!((a.abs_c0 - b.abs_c0).abs() < 1e-10);
                assert!((a.abs_cn - b.abs_cn).abs() < 1e-10);
                assert!((a.p_e - b.p_e).abs() < 1e-10);
                assert!((a.delta - b.delta).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn literal_convention_runs_twice_as_fast() {
    let n = 4;
    let p = CavityParams::new(n, 1.0, 0.0).unwrap().with_hopping(HoppingConvention::Literal);
    let h = build_two_cavity_hamiltonian(&p).unwrap();
    let fast = CavityParams::new(n, 1.0, 0.0).unwrap();
    let t = 0.9;
    let r = report_at(&p, &h, t).unwrap();
    let (c0, _) = analytic_amplitudes(&fast, 2.0 * t);
    assert!((r.measures.abs_c0 - c0.norm()).abs() < 1e-10);
}

#[test]
fn histogram_follows_the_unit_diagonal_for_two_photons() {
    // |c0| + |cN| = cos^2 + sin^2 = 1 for N = 2
    let p = CavityParams::new(2, 1.0, 0.0).unwrap();
    let scan = unitary_scan(&p, 200.0, 0.01).unwrap();
    let bins = 50;
    let hist = amplitude_visit_histogram(&scan, bins).unwrap();
    assert!((hist.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    for (i, j, w) in hist.occupied() {
        assert!(w > 0.0);
        let d = i as isize + j as isize - (bins as isize - 1);
        assert!(d.abs() <= 1, "bin ({i},{j}) off the diagonal");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelope_bound(n in 1usize..40, t in 0.0f64..20.0) {
        let p = CavityParams::new(n, 1.0, 0.0).unwrap();
        let (c0, cn) = analytic_amplitudes(&p, t);
        let m = noon_measures(c0, cn, n, 0.0);
        prop_assert!(m.p_e <= 2f64.powi(-(n as i32 - 1)) + 1e-12);
        prop_assert!(m.p_e <= max_entanglement_probability(&p) + 1e-12);
    }

    #[test]
    fn delta_identity_under_unitary_evolution(n in 1usize..16, t in 0.0f64..15.0) {
        let p = CavityParams::new(n, 1.0, 0.0).unwrap();
        let h = build_two_cavity_hamiltonian(&p).unwrap();
        let m = report_at(&p, &h, t).unwrap().measures;
        let c = (n as f64 * PI / 2.0).cos();
        prop_assert!((m.delta - c * m.p_e).abs() < 1e-10);
        prop_assert!((m.fidelity_phi0 - m.fidelity_phipi - m.delta).abs() < 1e-12);
        prop_assert!(m.fidelity_phi0 >= -1e-15 && m.fidelity_phi0 <= 1.0 + 1e-12);
    }

    #[test]
    fn fidelity_at_pi_over_n(re0 in -1.0f64..1.0, im0 in -1.0f64..1.0, re1 in -1.0f64..1.0, im1 in -1.0f64..1.0, n in 1usize..9) {
        let c0 = Complex64::new(re0, im0) * 0.7;
        let cn = Complex64::new(re1, im1) * 0.7;
        let m = noon_measures(c0, cn, n, PI / n as f64);
        prop_assert!((m.fidelity_phi - m.fidelity_phipi).abs() < 1e-12);
        let overlap = 0.5 * (c0 + cn).norm_sqr();
        prop_assert!((m.fidelity_phi0 - overlap).abs() < 1e-12);
        prop_assert!(m.phase > -PI && m.phase <= PI);
    }
}
