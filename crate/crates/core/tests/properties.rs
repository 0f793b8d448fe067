//! Property tests for the physical invariants of each module.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use polariton_embed::embedding::{ensemble_polarization, qerra_dress, qerra_inverse, DressedGreen, LocalFieldParams};
use polariton_embed::greens::{
    fp_scattering_green_detailed, free_space_im_green, single_mode_green, sqrt_upper, LorentzianMode,
    QuadratureSettings,
};
use polariton_embed::medium::{
    clausius_mossotti_dilute, drude, drude_gold, permittivity_from_chi, EnsembleSpec, Permittivity, Region,
};
use polariton_embed::polarizability::{
    alpha_full, alpha_mixture, alpha_rwa, alpha_sos, isotropic_average, EmitterModel, MixtureModel, SumOverStatesModel,
    Transition, TwoLevelEmitter,
};
use polariton_embed::qo_models::{
    coupling_from_mode, explicit_ensemble_hamiltonian, hp_single_excitation, qerra_polariton_params,
    tc_single_excitation,
};
use polariton_embed::quadrature::{integrate_segments, AdaptiveOptions};
use polariton_embed::units::{debye, ev, nm, per_nm3, Quantity, Unit, EPSILON_0, SPEED_OF_LIGHT};
use proptest::prelude::*;

const SPECTRAL: [Unit; 5] = [
    Unit::ElectronVolt,
    Unit::Hartree,
    Unit::RadPerSecond,
    Unit::TwoPiTeraHertz,
    Unit::TwoPiPetaHertz,
];
const LENGTH: [Unit; 2] = [Unit::Nanometer, Unit::Bohr];
const DIPOLE: [Unit; 2] = [Unit::Debye, Unit::AtomicDipole];

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

fn emitter() -> impl Strategy<Value = TwoLevelEmitter> {
    (0.1..5.0f64, 0.05..0.5f64, 1e-4..0.3f64).prop_map(|(d, w, g)| TwoLevelEmitter::new(d, w, g * w).unwrap())
}

fn sos_model() -> impl Strategy<Value = SumOverStatesModel> {
    (
        prop::collection::vec((0.1..0.6f64, prop::array::uniform3(-2.0..2.0f64)), 1..5),
        1e-3..2e-2f64,
    )
        .prop_map(|(ts, eta)| {
            let ts = ts
                .into_iter()
                .map(|(omega, dipole)| Transition { omega, dipole })
                .collect();
            SumOverStatesModel::new(ts, eta).unwrap()
        })
}

/// Re α(ω) from Im α by a subtracted principal-value integral over (0, ∞).
fn kramers_kronig_re(model: &EmitterModel, omega: f64, scale: f64, resonances: &[f64]) -> f64 {
    let im = |w: f64| model.alpha(w).unwrap().im;
    let im0 = im(omega);
    let top = 1e4 * scale;
    let mut bps = vec![0.0, omega, top];
    for &r in resonances {
        for k in [0.5, 0.9, 1.0, 1.1, 2.0] {
            bps.push(k * r);
        }
    }
    bps.sort_by(f64::total_cmp);
    bps.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * scale);
    let opts = AdaptiveOptions {
        rel_tol: 1e-10,
        abs_tol: 0.0,
        max_subdivisions: 20_000,
    };
    let body = integrate_segments(
        |w| Complex64::from((w * im(w) - omega * im0) / (w * w - omega * omega)),
        &bps,
        opts,
    )
    .unwrap()
    .value
    .re;
    // beyond `top` the integrand is −ω Im α(ω)/ω'² to leading order
    let tail = -omega * im0 / top;
    2.0 / PI * (body + tail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_round_trips(v in 1e-3..1e3f64, i in 0usize..5, j in 0usize..5, k in 0usize..2, l in 0usize..2) {
        for (a, b) in [(SPECTRAL[i], SPECTRAL[j]), (LENGTH[k], LENGTH[l]), (DIPOLE[k], DIPOLE[l]),
                       (SPECTRAL[i], LENGTH[k])] {
            let there = Quantity::new(v, a).convert(b).unwrap();
            let back = there.convert(a).unwrap();
            prop_assert!(close(back.value, v, 1e-12), "{a} -> {b} -> {a}: {v} became {}", back.value);
        }
    }

    #[test]
    fn unit_dimensions_do_not_mix(v in 1e-3..1e3f64, i in 0usize..5, k in 0usize..2) {
        prop_assert!(Quantity::new(v, DIPOLE[k]).convert(SPECTRAL[i]).is_err());
        prop_assert!(Quantity::new(v, LENGTH[k]).convert(DIPOLE[k]).is_err());
    }

    #[test]
    fn two_level_models_are_passive(e in emitter()) {
        for i in 1..=1000 {
            let w = 5.0 * e.omega_a() * i as f64 / 1000.0;
            prop_assert!(alpha_rwa(&e, w).unwrap().im > 0.0);
            prop_assert!(alpha_full(&e, w).unwrap().im > 0.0);
        }
    }

    #[test]
    fn sos_is_passive(m in sos_model()) {
        for i in 1..=1000 {
            let w = 1.5 * i as f64 / 1000.0;
            prop_assert!(isotropic_average(&alpha_sos(&m, w)).im > 0.0);
        }
    }

    #[test]
    fn mixture_is_linear(a in emitter(), b in emitter(), f in 0.0..1.0f64, w in 0.01..1.0f64) {
        let m = MixtureModel::new(vec![(EmitterModel::rwa(a), f), (EmitterModel::full(b), 1.0 - f)]).unwrap();
        let expected = f * alpha_rwa(&a, w).unwrap() + (1.0 - f) * alpha_full(&b, w).unwrap();
        prop_assert!((alpha_mixture(&m, w).unwrap() - expected).norm() <= 1e-12 * expected.norm());
    }

    #[test]
    fn single_sos_term_is_a_lorentz(omega in 0.1..0.6f64, d in prop::array::uniform3(-2.0..2.0f64),
                                    eta in 1e-3..2e-2f64, w in 0.01..1.0f64) {
        let m = SumOverStatesModel::new(vec![Transition { omega, dipole: d }], eta).unwrap();
        let tensor = alpha_sos(&m, w);
        for axis in 0..3 {
            let lorentz = alpha_full(&m.equivalent_lorentz(0, axis).unwrap(), w).unwrap();
            prop_assert!((tensor[(axis, axis)] - lorentz).norm() <= 1e-10 * lorentz.norm().max(1e-300));
        }
    }

    #[test]
    fn drude_is_passive(wp in 0.05..1.0f64, g in 1e-4..0.1f64, w in 1e-3..2.0f64) {
        prop_assert!(drude(w, wp, g).im > 0.0);
    }

    #[test]
    fn ensemble_permittivity_is_passive_and_linear(e in emitter(), n in 1e-6..1e-2f64, w in 0.01..1.0f64) {
        let model = EmitterModel::full(e);
        let one = EnsembleSpec::from_density(n, model.clone(), Region::BetweenMirrors).unwrap();
        let two = EnsembleSpec::from_density(2.0 * n, model.clone(), Region::BetweenMirrors).unwrap();
        let chi1 = clausius_mossotti_dilute(&one, w).unwrap();
        let chi2 = clausius_mossotti_dilute(&two, w).unwrap();
        prop_assert!(permittivity_from_chi(chi1).im >= 0.0);
        prop_assert!((chi2 - 2.0 * chi1).norm() <= 1e-12 * chi2.norm());
        let direct = n / EPSILON_0 * alpha_full(&e, w).unwrap();
        prop_assert!((chi1 - direct).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn perpendicular_wavenumber_is_on_the_upper_branch(re in -10.0..10.0f64, im in -10.0..10.0f64) {
        let z = Complex64::new(re, im);
        let s = sqrt_upper(z);
        prop_assert!(s.im >= 0.0);
        prop_assert!((s * s - z).norm() <= 1e-12 * z.norm().max(1e-300));
    }

    #[test]
    fn lossy_mode_is_passive(wc in 0.05..0.5f64, q in 2.0..1e4f64, f1 in 1e-4..1.0f64, w in 0.01..1.0f64) {
        let m = LorentzianMode::with_quality_factor(wc, q, f1).unwrap();
        prop_assert!(single_mode_green(&m, w).unwrap().im > 0.0);
    }

    #[test]
    fn zero_coupling_returns_bare(re in -1e3..1e3f64, im in 1e-3..1e3f64, w in 0.01..1.0f64, v in 1e-3..1e3f64) {
        let bare = Complex64::new(re, im);
        prop_assert_eq!(qerra_dress(bare, Complex64::new(0.0, 0.0), v, w).unwrap(), bare);
    }

    #[test]
    fn dressing_preserves_passivity(wc in 0.1..0.3f64, q in 5.0..1e3f64, f1 in 1e-3..0.1f64,
                                     e in emitter(), n in 1.0..1e8f64, w in 0.01..1.0f64) {
        let m = LorentzianMode::with_quality_factor(wc, q, f1).unwrap();
        let spec = EnsembleSpec::new(n, 1.0, EmitterModel::rwa(e), Region::MicroVolume).unwrap();
        let bare = single_mode_green(&m, w).unwrap();
        let g = 1.0 / qerra_inverse(bare, ensemble_polarization(&spec, w).unwrap(), w).unwrap();
        prop_assert!(g.im >= 0.0, "Im G = {} at w = {w}", g.im);
    }

    #[test]
    fn polariton_poles_obey_the_reciprocal_sum(wc in 0.01..1.0f64, x in 0.0..0.99f64, g in 1e-9..1e-3f64) {
        let p = qerra_polariton_params(wc, x * wc, g).unwrap();
        prop_assert!(close(1.0 / p.omega_plus + 1.0 / p.omega_minus, 2.0 / wc, 1e-13));
        prop_assert!(close(1.0 / p.omega_plus - 1.0 / p.omega_minus, 2.0 * x / wc, 1e-9) || x < 1e-6);
    }

    #[test]
    fn residues_match_polariton_couplings(wc in 0.1..0.3f64, x in 0.01..0.13f64, d in 0.5..3.0f64, n_log in 2.0..8.0f64) {
        let n = 10f64.powf(n_log);
        // f1 such that g√N = x ω_c
        let f1 = x * SPEED_OF_LIGHT * EPSILON_0.sqrt() / (d * n.sqrt());
        let mode = LorentzianMode::new(wc, 0.0, f1).unwrap();
        let g = coupling_from_mode(&mode, d);
        let p = qerra_polariton_params(wc, g * n.sqrt(), g).unwrap();
        let spec = EnsembleSpec::new(n, 1.0, EmitterModel::rwa(TwoLevelEmitter::new(d, wc, 0.0).unwrap()),
                                     Region::MicroVolume).unwrap();
        let inverse = |w: f64| {
            qerra_inverse(single_mode_green(&mode, w).unwrap(), ensemble_polarization(&spec, w).unwrap(), w).unwrap()
        };
        for (pole, coupling) in [(p.omega_plus, p.g_plus), (p.omega_minus, p.g_minus)] {
            prop_assert!(inverse(pole).norm() <= 1e-9 * (1.0 / (f1 * f1)) * wc);
            let h = 1e-6 * wc;
            let slope = (inverse(pole + h) - inverse(pole - h)) / (2.0 * h);
            let residue = 1.0 / slope.re;
            let mapped = residue.abs() * d * d * wc * wc / (EPSILON_0 * SPEED_OF_LIGHT * SPEED_OF_LIGHT);
            prop_assert!(close(mapped, coupling * coupling, 1e-6), "{mapped} vs {}", coupling * coupling);
        }
    }

    #[test]
    fn holstein_primakoff_equals_tavis_cummings(wc in 0.01..1.0f64, det in 0.5..1.5f64,
                                                n in 1u64..10_000_000, x in 1e-6..0.3f64) {
        let g = x * wc / (n as f64).sqrt();
        let hp = hp_single_excitation(wc, det * wc, g, n).unwrap();
        let tc = tc_single_excitation(wc, det * wc, g, n).unwrap();
        prop_assert!(hp.max_abs_diff(&tc).unwrap() <= 1e-14 * wc);
    }

    #[test]
    fn tavis_cummings_matches_explicit_ensemble(wc in 0.05..0.5f64, n in 1u64..200, x in 1e-3..0.3f64) {
        let g = x * wc / (n as f64).sqrt();
        let tc = tc_single_excitation(wc, wc, g, n).unwrap().eigenvalues();
        let count = n as usize + 1;
        let ex = explicit_ensemble_hamiltonian(wc, &vec![wc; count], &vec![g; count]).unwrap().eigenvalues();
        prop_assert!((tc[0] - ex[0]).abs() <= 1e-10);
        prop_assert!((tc[2] - ex[count]).abs() <= 1e-10);
        prop_assert!((tc[1] - wc).abs() <= 1e-10);
        prop_assert!(ex[1..count].iter().all(|v| (v - wc).abs() <= 1e-10));
    }

    #[test]
    fn degenerate_ensemble_has_n_minus_one_dark_states(wc in 0.05..0.5f64, det in 0.8..1.2f64,
                                                       n in 1usize..120, g in 1e-4..1e-2f64) {
        let wa = det * wc;
        let ev = explicit_ensemble_hamiltonian(wc, &vec![wa; n], &vec![g; n]).unwrap().eigenvalues();
        let dark = ev.iter().filter(|v| (*v - wa).abs() <= 1e-10).count();
        prop_assert_eq!(dark, n - 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kramers_kronig_holds_for_the_lorentz_model(wa in 0.1..0.5f64, gr in 0.02..0.3f64, t in 0.1..3.0f64) {
        let e = TwoLevelEmitter::new(1.0, wa, gr * wa).unwrap();
        let model = EmitterModel::full(e);
        let w = t * wa;
        let direct = model.alpha(w).unwrap();
        let kk = kramers_kronig_re(&model, w, wa, &[wa]);
        prop_assert!((kk - direct.re).abs() <= 0.01 * direct.norm(), "KK {kk} vs {}", direct.re);
    }

    #[test]
    fn kramers_kronig_holds_for_sum_over_states(m in sos_model(), w in 0.05..1.0f64) {
        let resonances: Vec<f64> = m.transitions().iter().map(|t| t.omega).collect();
        let model = EmitterModel::SumOverStates(m);
        let direct = model.alpha(w).unwrap();
        let kk = kramers_kronig_re(&model, w, 0.3, &resonances);
        prop_assert!((kk - direct.re).abs() <= 0.01 * direct.norm(), "KK {kk} vs {}", direct.re);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn full_embedding_spectral_density_is_non_negative(ev_ in 3.5..8.0f64, d in 0.5..3.0f64, density in 0.5..5.0f64) {
        let w = ev(ev_);
        let e = TwoLevelEmitter::new(debye(d), ev(5.44), ev(0.05)).unwrap();
        let spec = EnsembleSpec::from_density(per_nm3(density), EmitterModel::full(e), Region::BetweenMirrors).unwrap();
        let lf = LocalFieldParams::new(nm(1.0), Permittivity::Ensemble(Arc::new(spec))).unwrap();
        let green = DressedGreen::full_mqed(nm(388.0), Permittivity::gold(), lf, QuadratureSettings::default()).unwrap();
        let j = green.evaluate(w).unwrap().j();
        prop_assert!(j >= 0.0, "J = {j} at {ev_} eV");
    }
}

#[test]
fn quadrature_tolerance_halving_is_self_consistent() {
    let tol = 1e-6;
    let fill = Complex64::new(1.4, 0.05);
    let coarse = QuadratureSettings {
        rel_tol: tol,
        ..QuadratureSettings::default()
    };
    let fine = QuadratureSettings {
        rel_tol: tol / 2.0,
        ..QuadratureSettings::default()
    };
    for i in 0..50 {
        let w = ev(3.5 + 4.5 * i as f64 / 49.0);
        let mirror = drude_gold(w);
        let a = fp_scattering_green_detailed(nm(388.0), fill, mirror, w, &coarse).unwrap();
        let b = fp_scattering_green_detailed(nm(388.0), fill, mirror, w, &fine).unwrap();
        let scale = b.value.norm().max(free_space_im_green(w));
        assert!(
            (a.value - b.value).norm() <= tol * scale,
            "point {i}: |dG| = {:.3e}, scale {:.3e}",
            (a.value - b.value).norm(),
            scale
        );
        assert!(
            b.tail_bound <= tol / 2.0 * scale,
            "point {i}: tail bound {:.3e}",
            b.tail_bound
        );
    }
}
