#![allow(dead_code)]

//! State-vector vs closed-form parity on random error realizations.

use ghz_budget::pulse::{pulse_unitary_ideal, SequenceKind, Unitary2};
use ghz_budget::statevector::{
    build_initial, parity_analytic_reference, ErrorDraws, InitialStateSpec, Representation,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    ProductThreePulse,
    GroundThreePulse,
    NoiseTwoPulse,
    GhzTwoPulse,
    GhzPhaseTwoPulse,
    EntangledTwoPulse,
    EntangledThreePulse,
    PulseAreaTwoPulse,
    PulseAreaProduct,
}

pub const KINDS: [Kind; 9] = [
    Kind::ProductThreePulse,
    Kind::GroundThreePulse,
    Kind::NoiseTwoPulse,
    Kind::GhzTwoPulse,
    Kind::GhzPhaseTwoPulse,
    Kind::EntangledTwoPulse,
    Kind::EntangledThreePulse,
    Kind::PulseAreaTwoPulse,
    Kind::PulseAreaProduct,
];

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-PI..PI)
}

fn qubit(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let t = rng.random_range(0.0..PI);
    [Complex64::new((t / 2.0).cos(), 0.0), Complex64::from_polar((t / 2.0).sin(), angle(rng))]
}

/// Largest |state-vector − closed form| over `count` realizations at atom count `n`.
pub fn max_deviation(kind: Kind, n: usize, count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let spec = match kind {
            Kind::ProductThreePulse | Kind::PulseAreaProduct => {
                InitialStateSpec::Product { amplitudes: (0..n).map(|_| qubit(&mut rng)).collect() }
            }
            Kind::GroundThreePulse => InitialStateSpec::Product {
                amplitudes: vec![[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]; n],
            },
            Kind::NoiseTwoPulse => InitialStateSpec::Noise {
                theta: (0..n).map(|_| rng.random_range(0.0..PI)).collect(),
                varphi: (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect(),
            },
            Kind::GhzTwoPulse => InitialStateSpec::Ghz,
            Kind::GhzPhaseTwoPulse => InitialStateSpec::GhzPhase { beta: angle(&mut rng) },
            Kind::EntangledTwoPulse | Kind::EntangledThreePulse | Kind::PulseAreaTwoPulse => {
                let q = qubit(&mut rng);
                InitialStateSpec::Entangled { c_g: q[0], c_e: q[1] }
            }
        };
        let three = matches!(kind, Kind::ProductThreePulse | Kind::GroundThreePulse | Kind::EntangledThreePulse);
        let area_err = matches!(kind, Kind::PulseAreaTwoPulse | Kind::PulseAreaProduct);
        let (v, w) = if area_err { (0.3 * angle(&mut rng), 0.3 * angle(&mut rng)) } else { (0.0, 0.0) };

        let mut us = Vec::with_capacity(n);
        let mut phi = Vec::with_capacity(n);
        let mut phi_t = Vec::with_capacity(n);
        for _ in 0..n {
            // φ_t vanishes at t = 0 by construction, so the first pulse carries no phase
            let (pt, p2) = (3.0 * angle(&mut rng), 5.0 * angle(&mut rng));
            let u: Unitary2<f64> = if three {
                pulse_unitary_ideal(FRAC_PI_2, p2) * pulse_unitary_ideal(PI, pt) * pulse_unitary_ideal(FRAC_PI_2, 0.0)
            } else {
                pulse_unitary_ideal(FRAC_PI_2 + v, p2) * pulse_unitary_ideal(PI + w, pt)
            };
            us.push(u);
            phi.push(p2 - 2.0 * pt);
            phi_t.push(pt);
        }
        let mut state = build_initial(&spec, n, Representation::Dense).unwrap();
        state.apply_local_in_place(&us).unwrap();
        let sv = state.parity_expectation();
        let draws = ErrorDraws { area_errors: area_err.then_some((v, w)), phi_t };
        let seq = if three { SequenceKind::ThreePulse } else { SequenceKind::TwoPulse };
        let an = parity_analytic_reference(&spec, seq, &phi, &draws).unwrap();
        worst = worst.max((sv - an).abs());
    }
    worst
}
