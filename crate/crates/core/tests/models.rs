mod common;

use common::{expm_oracle, isospectral_oracle, measurement_oracle};
use nhchain::evolution::{evolve_mixed, propagator, shifted_propagator, QuantumState, SpectralEvolution};
use nhchain::hamiltonians::{
    build_hamiltonian, stationary_purity_cosh_ratio, stationary_purity_sech_form, stationary_state,
};
use nhchain::spectral::{decompose_model, Diagonalizer, GeneralDiagonalizer};
use nhchain::{c64, Preset, SpinChainParams};

const PRESETS: [Preset; 3] = [Preset::Integrable, Preset::Chaotic, Preset::Classical];

#[test]
fn builders_match_pauli_sum_oracle() {
    for preset in PRESETS {
        for l in [1, 3, 4] {
            for gamma in [0.0, 0.3, 1.7] {
                let p = SpinChainParams::measurement(preset, l, gamma);
                let oracle = measurement_oracle(l, p.j, p.g, p.h, gamma);
                assert!(build_hamiltonian(&p).unwrap().max_abs_diff(&oracle) < 1e-13, "{}", p.describe());
            }
            for beta in [0.0, 0.25, 1.0] {
                let p = SpinChainParams::isospectral(preset, l, beta);
                let oracle = isospectral_oracle(l, p.j, p.g, p.h, beta);
                assert!(build_hamiltonian(&p).unwrap().max_abs_diff(&oracle) < 1e-12, "{}", p.describe());
            }
        }
    }
}

fn sorted_real_parts(mut ev: Vec<c64>) -> Vec<c64> {
    ev.sort_by(|a, b| a.re.total_cmp(&b.re));
    ev
}

#[test]
fn isospectral_spectrum_from_general_solver() {
    for l in [4, 6] {
        let tfim = build_hamiltonian(&SpinChainParams::hermitian(Preset::Chaotic, l)).unwrap();
        let reference = sorted_real_parts(tfim.as_mat().eigenvalues().unwrap());
        for beta in [0.25, 1.0] {
            let h = build_hamiltonian(&SpinChainParams::isospectral(Preset::Chaotic, l, beta)).unwrap();
            let ev = sorted_real_parts(h.as_mat().eigenvalues().unwrap());
            let worst = ev.iter().zip(&reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(worst < 1e-8, "L={l} beta={beta}: {worst:e}");
        }
    }
}

#[test]
fn propagators_match_taylor_oracle() {
    let cases = [
        SpinChainParams::hermitian(Preset::Chaotic, 4),
        SpinChainParams::measurement(Preset::Chaotic, 4, 0.5),
        SpinChainParams::measurement(Preset::Integrable, 4, 1.3),
        SpinChainParams::isospectral(Preset::Chaotic, 4, 1.0),
    ];
    for p in &cases {
        let h = build_hamiltonian(p).unwrap();
        let spec = decompose_model(p).unwrap();
        for t in [0.3, 2.0] {
            let u = propagator(&spec, t).unwrap();
            let oracle = expm_oracle(&h, t);
            let scale = oracle.max_abs().max(1.0);
            assert!(u.max_abs_diff(&oracle) / scale < 1e-9, "{} t={t}", p.describe());
            let shifted = shifted_propagator(&spec, t).unwrap();
            let factor = (-spec.max_imag() * t).exp();
            assert!(shifted.max_abs_diff(&oracle.scale(c64::new(factor, 0.0))) / (scale * factor) < 1e-9);
        }
    }
}

#[test]
fn spectral_evolution_matches_dense_propagation() {
    let p = SpinChainParams::measurement(Preset::Chaotic, 5, 1.3);
    let h = build_hamiltonian(&p).unwrap();
    let spec = decompose_model(&p).unwrap();
    let psi0 = QuantumState::basis(32, 0b01010);
    let evolution = SpectralEvolution::new(&spec, &psi0).unwrap();
    for t in [0.5, 3.0] {
        let dense = expm_oracle(&h, t).apply(psi0.as_pure().unwrap());
        let norm = dense.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let got = evolution.state_at(t).unwrap();
        let got = got.as_pure().unwrap();
        let overlap: c64 = got.iter().zip(&dense).map(|(a, b)| a.conj() * b).sum::<c64>() / norm;
        assert!((overlap.norm() - 1.0).abs() < 1e-10, "t={t}");
        let phase = overlap / overlap.norm();
        let worst = got.iter().zip(&dense).map(|(a, b)| (a * phase - b / norm).norm()).fold(0.0, f64::max);
        assert!(worst < 1e-9);
    }
}

#[test]
fn general_and_similarity_paths_agree() {
    let p = SpinChainParams::isospectral(Preset::Chaotic, 5, 0.5);
    let h = build_hamiltonian(&p).unwrap();
    let general = GeneralDiagonalizer.decompose(&h).unwrap();
    let similarity = decompose_model(&p).unwrap();
    for t in [0.7, 4.0] {
        let a = propagator(&general, t).unwrap();
        let b = propagator(&similarity, t).unwrap();
        assert!(a.max_abs_diff(&b) / b.max_abs() < 1e-9);
    }
}

#[test]
fn stationary_state_is_fixed_and_purity_matches_closed_form() {
    for l in [4, 6] {
        for beta in [0.25, 1.0, 2.0] {
            let p = SpinChainParams::isospectral(Preset::Chaotic, l, beta);
            let spec = decompose_model(&p).unwrap();
            let ss = stationary_state(beta, l).unwrap();
            let rho0 = QuantumState::mixed(ss.rho.clone()).unwrap();
            for t in [0.5, 5.0] {
                let u = propagator(&spec, t).unwrap();
                let rho_t = evolve_mixed(&u, &rho0).unwrap();
                let drift = rho_t.as_mixed().unwrap().max_abs_diff(&ss.rho);
                assert!(drift <= 1e-8, "L={l} beta={beta} t={t}: {drift:e}");
            }
            let purity = (&ss.rho * &ss.rho).trace().re;
            assert!((purity - stationary_purity_cosh_ratio(beta, l)).abs() < 1e-12);
            assert!((ss.purity - purity).abs() < 1e-12);
            let other = stationary_purity_sech_form(beta, l);
            assert!((other - purity).abs() > 1e-3, "the two closed forms differ for beta={beta}");
        }
    }
}

#[test]
fn stationary_state_under_taylor_propagator() {
    let (l, beta) = (4, 1.0);
    let h = build_hamiltonian(&SpinChainParams::isospectral(Preset::Integrable, l, beta)).unwrap();
    let ss = stationary_state(beta, l).unwrap();
    let rho0 = QuantumState::mixed(ss.rho.clone()).unwrap();
    let rho_t = evolve_mixed(&expm_oracle(&h, 1.5), &rho0).unwrap();
    assert!(rho_t.as_mixed().unwrap().max_abs_diff(&ss.rho) < 1e-10);
}
