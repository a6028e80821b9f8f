#![allow(dead_code)]

//! Monte Carlo vs closed-form Π₀ for each error source at three settings.

use ghz_budget::constants::AtomSpecies;
use ghz_budget::distributions::{QuadratureSpec, TrapConfig};
use ghz_budget::error_models::{
    pi0_atom_loss, pi0_measurement, pi0_momentum_spread, pi0_phase_noise, pi0_pulse_area_exact, pi0_spontaneous,
    pi0_state_prep, pulse_area_variances, q_spontaneous,
};
use ghz_budget::momentum::eta_numeric;
use ghz_budget::pulse::{Drive, SequenceKind, SequenceSpec};
use ghz_budget::statevector::{
    estimate_pi0, monte_carlo_parity, phi_grid, InitialStateSpec, LaserPhaseNoise, Pi0Estimate, PulseAreaNoise,
    ShotConfig, StatePrepNoise,
};
use std::f64::consts::TAU;

pub const ATOM_COUNTS: [usize; 3] = [2, 6, 10];
pub const GRID_POINTS: usize = 16;

#[derive(Debug, Clone)]
pub struct Case {
    pub source: &'static str,
    pub setting: String,
    pub n: usize,
    pub mc: Pi0Estimate<f64>,
    pub closed: f64,
    pub tolerance: f64,
}

impl Case {
    pub fn deviation(&self) -> f64 {
        (self.mc.pi0 - self.closed).abs()
    }

    pub fn passed(&self) -> bool {
        self.deviation() <= self.tolerance
    }
}

/// Three-SE band with a floor for exactly reproduced values.
fn three_se(est: &Pi0Estimate<f64>) -> f64 {
    (3.0 * est.std_error).max(1e-12)
}

pub fn sequence() -> SequenceSpec<f64> {
    let atom = AtomSpecies::cs133();
    SequenceSpec::with_epsilon(SequenceKind::TwoPulse, 1e-3, 9.8, 0.0, &atom).unwrap()
}

fn run(cfg: &ShotConfig<f64>, n: usize) -> Pi0Estimate<f64> {
    let fit = monte_carlo_parity(&InitialStateSpec::Ghz, &sequence(), cfg, n, &phi_grid(n, GRID_POINTS)).unwrap();
    estimate_pi0(&fit)
}

type Setup = (String, Box<dyn Fn(&mut ShotConfig<f64>)>, Box<dyn Fn(u64) -> f64>);

fn setups(source: &str) -> Vec<Setup> {
    let atom = AtomSpecies::cs133();
    match source {
        "state_prep" => [(0.0, 0.09), (0.05, 0.1), (0.1, 0.3)]
            .into_iter()
            .map(|(q, s2): (f64, f64)| -> Setup {
                (
                    format!("q_zeta={q} sigma_beta2={s2}"),
                    Box::new(move |c| c.state_prep = Some(StatePrepNoise { q_zeta: q, sigma_beta2: s2 })),
                    Box::new(move |n| pi0_state_prep(n, q, s2).unwrap().pi0_exact),
                )
            })
            .collect(),
        "pulse_area" => [0.01, 0.03, 0.05]
            .into_iter()
            .map(|xi: f64| -> Setup {
                let (sv2, sw2) = pulse_area_variances(xi);
                (
                    format!("xi={xi}"),
                    Box::new(move |c| c.pulse_area = Some(PulseAreaNoise { sigma_v2: sv2, sigma_w2: sw2 })),
                    Box::new(move |n| pi0_pulse_area_exact(n, sv2, sw2).unwrap().pi0_exact),
                )
            })
            .collect(),
        "laser_phase" => [(0.01, 5.0), (0.02, 1.0), (0.03, 3.0)]
            .into_iter()
            .map(|(s, r): (f64, f64)| -> Setup {
                (
                    format!("sigma_theta={s} r_corr={r}"),
                    Box::new(move |c| c.laser_phase = Some(LaserPhaseNoise { sigma_theta2: s * s, r_corr: r })),
                    Box::new(move |n| pi0_phase_noise(n, s * s, r).unwrap().pi0_exact),
                )
            })
            .collect(),
        "momentum" => [(400e3, 14.5e3, 0.65e-6), (450e3, 10e3, 0.3e-6), (600e3, 5.9e3, 0.1e-6)]
            .into_iter()
            .map(|(om, nu, t): (f64, f64, f64)| -> Setup {
                let trap = TrapConfig::new(nu, t).unwrap();
                let omega = TAU * om;
                let eta = eta_numeric(&trap, &atom, omega, &QuadratureSpec::default()).unwrap().eta_num;
                (
                    format!("omega/2pi={om} nu={nu} T={t}"),
                    Box::new(move |c| {
                        c.trap = Some(trap);
                        c.drive = Drive::General { omega_eff: omega, stark_shift: 0.0 };
                    }),
                    Box::new(move |n| pi0_momentum_spread(n, eta).unwrap().pi0_exact),
                )
            })
            .collect(),
        "measurement" => [0.005, 0.013, 0.03]
            .into_iter()
            .map(|q: f64| -> Setup {
                (
                    format!("q_det={q}"),
                    Box::new(move |c| c.q_det = q),
                    Box::new(move |n| pi0_measurement(n, q).unwrap().pi0_exact),
                )
            })
            .collect(),
        "spontaneous" => [2e9, 5e9, 20e9]
            .into_iter()
            .map(|d: f64| -> Setup {
                let delta = TAU * d;
                let q = q_spontaneous(delta, &atom).unwrap();
                (
                    format!("delta/2pi={d}"),
                    Box::new(move |c| c.q_se = q),
                    Box::new(move |n| pi0_spontaneous(n, delta, &AtomSpecies::cs133()).unwrap().model.pi0_exact),
                )
            })
            .collect(),
        "atom_loss" => [0.02, 0.05, 0.1]
            .into_iter()
            .map(|q: f64| -> Setup {
                (
                    format!("q_loss={q}"),
                    Box::new(move |c| c.q_loss = q),
                    Box::new(move |n| pi0_atom_loss(n, q).unwrap().pi0_exact),
                )
            })
            .collect(),
        other => panic!("unknown source {other}"),
    }
}

pub const SOURCES: [&str; 7] =
    ["state_prep", "pulse_area", "laser_phase", "momentum", "measurement", "spontaneous", "atom_loss"];

/// All settings and atom counts for one source.
pub fn source_cases(source: &'static str, shots: u64, seed: u64) -> Vec<Case> {
    let mut out = Vec::new();
    let src = SOURCES.iter().position(|&s| s == source).unwrap() as u64;
    for (k, (setting, apply, closed)) in setups(source).into_iter().enumerate() {
        for n in ATOM_COUNTS {
            // independent streams per case; shared streams correlate the comparisons
            let case_seed = seed ^ (src << 48) ^ ((k as u64) << 32) ^ n as u64;
            let mut cfg = ShotConfig::new(shots, case_seed);
            apply(&mut cfg);
            let mc = run(&cfg, n);
            let closed = closed(n as u64);
            let mut tolerance = three_se(&mc);
            if source == "measurement" {
                tolerance = tolerance.max(0.5 * cfg.q_det * cfg.q_det * (n * n) as f64);
            }
            out.push(Case { source, setting: setting.clone(), n, mc, closed, tolerance });
        }
    }
    out
}
