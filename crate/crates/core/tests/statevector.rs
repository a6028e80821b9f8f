use ghz_budget::constants::AtomSpecies;
use ghz_budget::error::Error;
use ghz_budget::pulse::{pulse_unitary_ideal, sequence_unitaries, Drive, SequenceKind, SequenceSpec, Unitary2};
use ghz_budget::statevector::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

fn cs() -> AtomSpecies<f64> {
    AtomSpecies::cs133()
}

/// Two-pulse sequence whose kinematic phase is φ (via the chirp).
fn two_pulse_totals(n: usize, phi: f64) -> Vec<Unitary2<f64>> {
    let atom = cs();
    let t = 1e-3;
    let b = atom.wave_number * 9.8 + phi / (t * t);
    let seq = SequenceSpec::new(SequenceKind::TwoPulse, t, 9.8, b).unwrap();
    let u = sequence_unitaries(&seq, &atom, &Drive::Ideal, 0.0, &[]).unwrap();
    assert!((u.phi - phi).abs() < 1e-9);
    vec![u.total; n]
}

fn ghz_after(n: usize, us: &[Unitary2<f64>], repr: Representation) -> SpinState<f64> {
    let s = build_initial(&InitialStateSpec::<f64>::Ghz, n, repr).unwrap();
    apply_local(&s, us).unwrap()
}

/// Kronecker product of 2×2 matrices, atom 0 on the least significant bit.
fn kron(us: &[Unitary2<f64>]) -> Vec<Vec<C>> {
    let mut m = vec![vec![C::new(1.0, 0.0)]];
    for u in us {
        let d = m.len();
        let mut out = vec![vec![C::new(0.0, 0.0); 2 * d]; 2 * d];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = u.m[i / d][j / d] * m[i % d][j % d];
            }
        }
        m = out;
    }
    m
}

#[test]
fn ghz_single_atom_and_bell() {
    let s = build_initial(&InitialStateSpec::<f64>::Ghz, 1, Representation::Dense).unwrap().to_dense().unwrap();
    assert_eq!(s.amplitudes.len(), 2);
    for a in &s.amplitudes {
        assert!((a - C::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }
    let b = build_initial(&InitialStateSpec::<f64>::Ghz, 2, Representation::Dense).unwrap().to_dense().unwrap();
    let nz: Vec<usize> = (0..4).filter(|&j| b.amplitudes[j].norm() > 0.0).collect();
    assert_eq!(nz, vec![0, 3]);
    assert!((b.amplitudes[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
}

#[test]
fn ghz_has_two_nonzero_amplitudes() {
    for n in 1..=DENSE_CAP {
        let d = build_initial(&InitialStateSpec::<f64>::Ghz, n, Representation::Auto).unwrap().to_dense().unwrap();
        let nz: Vec<usize> = (0..d.amplitudes.len()).filter(|&j| d.amplitudes[j].norm() > 0.0).collect();
        assert_eq!(nz, vec![0, (1 << n) - 1]);
    }
}

#[test]
fn product_ground_is_basis_zero() {
    let spec = InitialStateSpec::Product { amplitudes: vec![[C::new(1.0, 0.0), C::new(0.0, 0.0)]; 5] };
    let d = build_initial(&spec, 5, Representation::Dense).unwrap().to_dense().unwrap();
    assert_eq!(d.amplitudes[0], C::new(1.0, 0.0));
    assert!(d.amplitudes[1..].iter().all(|a| a.norm() == 0.0));
    assert_eq!(parity_expectation(&build_initial(&spec, 5, Representation::Structured).unwrap()), 1.0);
}

#[test]
fn invalid_inputs() {
    assert!(build_initial(&InitialStateSpec::<f64>::Ghz, 0, Representation::Auto).is_err());
    assert!(matches!(
        build_initial(&InitialStateSpec::<f64>::Ghz, DENSE_CAP + 1, Representation::Dense),
        Err(Error::Capacity { .. })
    ));
    assert!(matches!(
        build_initial(&InitialStateSpec::<f64>::Ghz, 24, Representation::Auto).unwrap(),
        SpinState::Structured(_)
    ));
    let bad = InitialStateSpec::Entangled { c_g: C::new(1.0, 0.0), c_e: C::new(1.0, 0.0) };
    assert!(build_initial(&bad, 3, Representation::Auto).is_err());
    let s = build_initial(&InitialStateSpec::<f64>::Ghz, 3, Representation::Auto).unwrap();
    assert!(apply_local(&s, &[Unitary2::identity(); 2]).is_err());
}

#[test]
fn identity_leaves_state_unchanged() {
    let s = build_initial(&InitialStateSpec::GhzPhase { beta: 0.4 }, 6, Representation::Dense).unwrap();
    assert_eq!(apply_local(&s, &[Unitary2::identity(); 6]).unwrap(), s);
}

#[test]
fn single_atom_three_pulse_gives_cos_phi() {
    let atom = cs();
    let ground = InitialStateSpec::Product { amplitudes: vec![[C::new(1.0, 0.0), C::new(0.0, 0.0)]] };
    for phi in [0.0, 0.3, 1.2, 2.9, -2.0] {
        let b = atom.wave_number * 9.8 + phi / 1e-6;
        let seq = SequenceSpec::new(SequenceKind::ThreePulse, 1e-3, 9.8, b).unwrap();
        let u = sequence_unitaries(&seq, &atom, &Drive::Ideal, 1e-28, &[]).unwrap();
        for repr in [Representation::Dense, Representation::Structured] {
            let s = apply_local(&build_initial(&ground, 1, repr).unwrap(), &[u.total]).unwrap();
            assert!((parity_expectation(&s) - phi.cos()).abs() < 1e-9, "phi = {phi}");
        }
    }
}

#[test]
fn ghz_three_atoms_dark_fringe() {
    let phi = PI / 6.0;
    let us = two_pulse_totals(3, phi);
    // explicit 8-amplitude arithmetic
    let m = kron(&us);
    let h = FRAC_1_SQRT_2;
    let psi: Vec<C> = (0..8).map(|i| m[i][0] * h + m[i][7] * h).collect();
    let explicit: f64 = psi.iter().enumerate().map(|(j, a)| a.norm_sqr() * if j.count_ones() % 2 == 0 { 1.0 } else { -1.0 }).sum();
    assert!(explicit.abs() < 1e-12);
    for repr in [Representation::Dense, Representation::Structured] {
        assert!(parity_expectation(&ghz_after(3, &us, repr)).abs() < 1e-12);
    }
}

#[test]
fn ghz_four_atoms_fringe() {
    let us = two_pulse_totals(4, 0.2);
    for repr in [Representation::Dense, Representation::Structured] {
        assert!((parity_expectation(&ghz_after(4, &us, repr)) - 0.696_706_709_347_165_4).abs() < 1e-12);
    }
}

#[test]
fn ghz_parity_curve_is_cos_n_phi() {
    for n in 1..=10 {
        for k in 0..25 {
            let phi = -PI + 2.0 * PI * k as f64 / 25.0;
            let p = parity_expectation(&ghz_after(n, &two_pulse_totals(n, phi), Representation::Dense));
            assert!((p - (n as f64 * phi).cos()).abs() < 1e-12, "N = {n}, phi = {phi}");
        }
    }
}

#[test]
fn basis_state_parities() {
    for n in 1..=7 {
        let e = InitialStateSpec::Product { amplitudes: vec![[C::new(0.0, 0.0), C::new(1.0, 0.0)]; n] };
        let want = if n % 2 == 0 { 1.0 } else { -1.0 };
        for repr in [Representation::Dense, Representation::Structured] {
            assert_eq!(parity_expectation(&build_initial(&e, n, repr).unwrap()), want);
        }
    }
}

#[test]
fn histograms() {
    let g = build_initial(&InitialStateSpec::<f64>::Ghz, 6, Representation::Dense).unwrap();
    let h = excitation_histogram(&g);
    assert!((h[0] - 0.5).abs() < 1e-15 && (h[6] - 0.5).abs() < 1e-15);
    assert!(h[1..6].iter().all(|&p| p.abs() < 1e-15));

    let n = 8;
    let plus = InitialStateSpec::Product { amplitudes: vec![[C::new(FRAC_1_SQRT_2, 0.0); 2]; n] };
    for repr in [Representation::Dense, Representation::Structured] {
        let h = excitation_histogram(&build_initial(&plus, n, repr).unwrap());
        let mut binom = 1.0;
        for (m, p) in h.iter().enumerate() {
            assert!((p - binom / 256.0).abs() < 1e-14);
            binom *= (n - m) as f64 / (m + 1) as f64;
        }
    }
}

#[test]
fn bell_after_half_pulses_matches_dense_matrix() {
    let u = pulse_unitary_ideal(FRAC_PI_2, 0.37);
    let m = kron(&[u, u]);
    let h = FRAC_1_SQRT_2;
    let psi: Vec<C> = (0..4).map(|i| m[i][0] * h + m[i][3] * h).collect();
    let want = [psi[0].norm_sqr(), psi[1].norm_sqr() + psi[2].norm_sqr(), psi[3].norm_sqr()];
    for repr in [Representation::Dense, Representation::Structured] {
        let h = excitation_histogram(&ghz_after(2, &[u, u], repr));
        for (a, b) in h.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}

fn random_unitary() -> impl Strategy<Value = Unitary2<f64>> {
    (0.0..2.0 * PI, -PI..PI, -PI..PI, -PI..PI).prop_map(|(a, p, q, r)| {
        pulse_unitary_ideal(a, p) * Unitary2 { m: [[C::from_polar(1.0, q), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::from_polar(1.0, r)]] }
    })
}

fn any_spec(n: usize) -> impl Strategy<Value = InitialStateSpec<f64>> {
    let qubits = prop::collection::vec((0.0..PI, -PI..PI), n).prop_map(|v| InitialStateSpec::Product {
        amplitudes: v.iter().map(|&(t, p)| [C::new((t / 2.0).cos(), 0.0), C::from_polar((t / 2.0).sin(), p)]).collect(),
    });
    prop_oneof![
        Just(InitialStateSpec::Ghz),
        (-PI..PI).prop_map(|beta| InitialStateSpec::GhzPhase { beta }),
        (0.0..PI, -PI..PI).prop_map(|(t, p)| InitialStateSpec::Entangled {
            c_g: C::new((t / 2.0).cos(), 0.0),
            c_e: C::from_polar((t / 2.0).sin(), p)
        }),
        qubits,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dense_and_structured_agree(
        (spec, us) in (1usize..=9).prop_flat_map(|n| (any_spec(n), prop::collection::vec(random_unitary(), n)))
    ) {
        let n = us.len();
        let d = apply_local(&build_initial(&spec, n, Representation::Dense).unwrap(), &us).unwrap();
        let s = apply_local(&build_initial(&spec, n, Representation::Structured).unwrap(), &us).unwrap();
        prop_assert!((d.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((parity_expectation(&d) - parity_expectation(&s)).abs() < 1e-12);
        let (hd, hs) = (excitation_histogram(&d), excitation_histogram(&s));
        prop_assert!((hd.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for (a, b) in hd.iter().zip(&hs) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let sd = s.to_dense().unwrap();
        for (a, b) in d.to_dense().unwrap().amplitudes.iter().zip(&sd.amplitudes) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        prop_assert!((parity_from_histogram(&hd) - parity_expectation(&d)).abs() < 1e-12);
    }

    #[test]
    fn parity_is_expectation_of_sigma_z_product(
        us in (1usize..=6).prop_flat_map(|n| prop::collection::vec(random_unitary(), n))
    ) {
        let n = us.len();
        let d = apply_local(&build_initial(&InitialStateSpec::<f64>::Ghz, n, Representation::Dense).unwrap(), &us).unwrap();
        let z = Unitary2 { m: [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(-1.0, 0.0)]] };
        let m = kron(&vec![z; n]);
        let amps = d.to_dense().unwrap().amplitudes;
        let mut ev = C::new(0.0, 0.0);
        for i in 0..amps.len() {
            for j in 0..amps.len() {
                ev += amps[i].conj() * m[i][j] * amps[j];
            }
        }
        prop_assert!((ev.re - parity_expectation(&d)).abs() < 1e-12);
    }
}

#[test]
fn structured_reaches_large_n() {
    let n = 24;
    let s = ghz_after(n, &two_pulse_totals(n, 0.05), Representation::Structured);
    assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    assert!((parity_expectation(&s) - (24.0f64 * 0.05).cos()).abs() < 1e-10);
    let h = excitation_histogram(&s);
    assert!((parity_from_histogram(&h) - parity_expectation(&s)).abs() < 1e-10);
}

#[test]
fn readout_ghz_without_errors() {
    let n = 6;
    let s = build_initial(&InitialStateSpec::<f64>::Ghz, n, Representation::Dense).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let shots = 100_000;
    let mut zero = 0usize;
    for _ in 0..shots {
        match simulate_readout(&s, 0.0, 0.0, &mut rng).unwrap() {
            ReadoutOutcome::Detected(0) => zero += 1,
            ReadoutOutcome::Detected(m) => assert_eq!(m, n),
            ReadoutOutcome::Lost => panic!("no loss configured"),
        }
    }
    let f = zero as f64 / shots as f64;
    let se = (0.25 / shots as f64).sqrt();
    assert!((f - 0.5).abs() < 4.0 * se, "f = {f}");
}

#[test]
fn readout_loss_fraction() {
    let n = 10;
    let s = build_initial(&InitialStateSpec::<f64>::Ghz, n, Representation::Dense).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let shots = 100_000;
    let lost = (0..shots).filter(|_| simulate_readout(&s, 0.0, 0.02, &mut rng).unwrap() == ReadoutOutcome::Lost).count();
    let want = 1.0 - 0.98f64.powi(10);
    assert!((want - 0.183).abs() < 5e-4);
    let se = (want * (1.0 - want) / shots as f64).sqrt();
    assert!((lost as f64 / shots as f64 - want).abs() < 4.0 * se);
}

#[test]
fn readout_full_flip_mirrors_count() {
    let n = 5;
    let spec = InitialStateSpec::Product {
        amplitudes: (0..n).map(|k| if k < 2 { [C::new(0.0, 0.0), C::new(1.0, 0.0)] } else { [C::new(1.0, 0.0), C::new(0.0, 0.0)] }).collect(),
    };
    let s = build_initial(&spec, n, Representation::Structured).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        assert_eq!(simulate_readout(&s, 0.0, 0.0, &mut rng).unwrap(), ReadoutOutcome::Detected(2));
        assert_eq!(simulate_readout(&s, 1.0, 0.0, &mut rng).unwrap(), ReadoutOutcome::Detected(3));
    }
    assert!(simulate_readout(&s, 1.5, 0.0, &mut rng).is_err());
}

#[test]
fn analytic_examples() {
    let none = ErrorDraws::default();
    for n in [1usize, 3, 8] {
        let ground = InitialStateSpec::Product { amplitudes: vec![[C::new(1.0, 0.0), C::new(0.0, 0.0)]; n] };
        let p = parity_analytic_reference(&ground, SequenceKind::ThreePulse, &vec![0.3; n], &none).unwrap();
        assert!((p - 0.3f64.cos().powi(n as i32)).abs() < 1e-15);
    }
    let phis = [0.1, 0.25, -0.05, 0.4];
    let p = parity_analytic_reference(&InitialStateSpec::Ghz, SequenceKind::TwoPulse, &phis, &none).unwrap();
    assert!((p - 0.7f64.cos()).abs() < 1e-15);

    let tail = 0.01f64.sin().powi(10) * 0.01f64.cos().powi(10);
    assert!(tail > 0.9e-20 && tail < 1.1e-20);
    let h = C::new(FRAC_1_SQRT_2, 0.0);
    let with = pulse_area_averaged(h, h, 10, 0.01, 0.01, 0.0);
    let lead = 0.01f64.cos().powi(10) * 0.005f64.cos().powi(20);
    assert!((with - lead).abs() < 1e-15);
    let (cg, ce) = (C::new(0.8, 0.0), C::new(0.0, 0.6));
    let (v, w, sum) = (0.5f64, 0.3f64, 0.9f64);
    let want = 2.0 * v.cos().powi(3) * (w / 2.0).cos().powi(6) * (cg.conj() * ce * C::from_polar(1.0, -sum)).re
        + (0.64 - 0.36) * v.sin().powi(3) * w.cos().powi(3);
    assert!((pulse_area_averaged(cg, ce, 3, v, w, sum) - want).abs() < 1e-15);

    let draws = ErrorDraws { area_errors: Some((0.1, 0.1)), phi_t: vec![] };
    assert!(parity_analytic_reference(&InitialStateSpec::Ghz, SequenceKind::ThreePulse, &[0.1], &draws).is_err());
}
