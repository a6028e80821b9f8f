//! Shot-by-shot sampling of error realizations and fringe fitting.
//!
//! Shot `s` of grid point `j` has global index `j·shots_per_point + s` and draws each
//! error source from its own counter-keyed stream. Shots are grouped in fixed chunks whose
//! accumulators merge in a fixed binary tree, so the aggregate is bit-identical for any
//! number of worker threads.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::constants::AtomSpecies;
use crate::distributions::{thermal_sigma, ThermalMomentum, TrapConfig, WrappedNormal};
use crate::error::{domain, Error, Result};
use crate::pulse::{interferometer_phase, sequence_unitaries, Drive, PulseOverride, SequenceKind, SequenceSpec};
use crate::rng::{stream, StreamSource, SHARED};
use crate::scalar::Real;

use super::analytic::two_component;
use super::readout::{binomial, sample_excitation};
use super::state::{build_initial, InitialStateSpec, Representation};

const CHUNK: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParityMode {
    /// Record ⟨Π⟩ of each realized state.
    #[default]
    Expectation,
    /// Record (−1)^M from a sampled readout.
    Projective,
}

/// What a detection error does to the recorded parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReadoutModel {
    /// Any misread atom replaces the shot's parity with a random ±1; mean factor (1 − q)^N.
    #[default]
    RandomOnError,
    /// Each misread atom flips the sign; mean factor (1 − 2q)^N.
    IndependentFlips,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePrepNoise<T> {
    /// Probability of preparing the noise state instead of Ψ(β).
    pub q_zeta: T,
    /// Variance of the wrapped-normal relative phase β.
    pub sigma_beta2: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseAreaNoise<T> {
    /// Variance of v, the π/2-pulse area error.
    pub sigma_v2: T,
    /// Variance of w, the π-pulse area error.
    pub sigma_w2: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserPhaseNoise<T> {
    /// Variance of the laser phase at each pulse.
    pub sigma_theta2: T,
    /// r_corr ∈ [1, 5]; the two phases have correlation (5 − r_corr)/4.
    pub r_corr: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotConfig<T> {
    /// Total shots, split evenly over the φ-grid.
    pub n_shots: u64,
    pub seed: u64,
    pub mode: ParityMode,
    pub readout: ReadoutModel,
    pub representation: Representation,
    pub atom: AtomSpecies<T>,
    /// Thermal momentum source; `None` puts every atom at p = 0.
    pub trap: Option<TrapConfig<T>>,
    pub drive: Drive<T>,
    pub state_prep: Option<StatePrepNoise<T>>,
    pub pulse_area: Option<PulseAreaNoise<T>>,
    pub laser_phase: Option<LaserPhaseNoise<T>>,
    pub q_det: T,
    pub q_loss: T,
    pub q_se: T,
}

impl<T: Real> ShotConfig<T> {
    /// Error-free Cs ensemble in a 10 kHz, 0.1 µK trap with ideal pulses.
    ///
    /// The thermal momenta are drawn even here: their Doppler phases are what
    /// suppresses the non-fringe cross terms under pulse-area noise.
    pub fn new(n_shots: u64, seed: u64) -> Self {
        Self {
            n_shots,
            seed,
            mode: ParityMode::default(),
            readout: ReadoutModel::default(),
            representation: Representation::Structured,
            atom: AtomSpecies::cs133(),
            trap: Some(TrapConfig { nu_trap: T::c(1e4), temperature: T::c(1e-7) }),
            drive: Drive::Ideal,
            state_prep: None,
            pulse_area: None,
            laser_phase: None,
            q_det: T::zero(),
            q_loss: T::zero(),
            q_se: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_shots == 0 {
            return Err(domain("ShotConfig", "n_shots must be >= 1"));
        }
        let prob = |name: &str, q: T| {
            if q >= T::zero() && q <= T::one() {
                Ok(())
            } else {
                Err(domain("ShotConfig", format!("{name} must lie in [0, 1], got {q}")))
            }
        };
        let var = |name: &str, s: T| {
            if s >= T::zero() && s.is_finite() {
                Ok(())
            } else {
                Err(domain("ShotConfig", format!("{name} must be finite and >= 0, got {s}")))
            }
        };
        prob("q_det", self.q_det)?;
        prob("q_loss", self.q_loss)?;
        prob("q_se", self.q_se)?;
        if let Some(sp) = &self.state_prep {
            prob("q_zeta", sp.q_zeta)?;
            var("sigma_beta2", sp.sigma_beta2)?;
        }
        if let Some(pa) = &self.pulse_area {
            var("sigma_v2", pa.sigma_v2)?;
            var("sigma_w2", pa.sigma_w2)?;
        }
        if let Some(lp) = &self.laser_phase {
            var("sigma_theta2", lp.sigma_theta2)?;
            if !(lp.r_corr >= T::one() && lp.r_corr <= T::c(5.0)) {
                return Err(domain("ShotConfig", format!("r_corr must lie in [1, 5], got {}", lp.r_corr)));
            }
        }
        if let Some(t) = &self.trap {
            t.validate()?;
        }
        Ok(())
    }

    fn shots_per_point(&self, points: usize) -> u64 {
        self.n_shots.div_ceil(points as u64)
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Welford<T> {
    count: u64,
    mean: T,
    m2: T,
    lost: u64,
}

impl<T: Real> Welford<T> {
    fn empty() -> Self {
        Self { count: 0, mean: T::zero(), m2: T::zero(), lost: 0 }
    }

    fn push(&mut self, x: T) {
        self.count += 1;
        let d = x - self.mean;
        self.mean = self.mean + d / T::c(self.count as f64);
        self.m2 = self.m2 + d * (x - self.mean);
    }

    fn merge(a: Self, b: Self) -> Self {
        let lost = a.lost + b.lost;
        if a.count == 0 {
            return Self { lost, ..b };
        }
        if b.count == 0 {
            return Self { lost, ..a };
        }
        let n = a.count + b.count;
        let (na, nb, nn) = (T::c(a.count as f64), T::c(b.count as f64), T::c(n as f64));
        let d = b.mean - a.mean;
        Self { count: n, mean: a.mean + d * nb / nn, m2: a.m2 + b.m2 + d * d * na * nb / nn, lost }
    }

    /// Pairwise reduction in index order.
    fn tree(mut parts: Vec<Self>) -> Self {
        if parts.is_empty() {
            return Self::empty();
        }
        while parts.len() > 1 {
            parts = parts.chunks(2).map(|c| if c.len() == 2 { Self::merge(c[0], c[1]) } else { c[0] }).collect();
        }
        parts[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint<T> {
    /// Scanned interferometer phase φ.
    pub phi: T,
    pub mean: T,
    pub std_error: T,
    pub kept: u64,
    pub lost: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FringeResult<T> {
    pub n: usize,
    pub points: Vec<FringePoint<T>>,
    /// Least-squares A in A·cos(Nφ).
    pub amplitude: T,
    pub amplitude_se: T,
    /// Least-squares B in B·sin(Nφ); nonzero when the fringe is shifted.
    pub quadrature: T,
    pub kept_fraction: T,
    pub kept_fraction_se: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pi0Estimate<T> {
    /// A·√(kept fraction): the fringe amplitude charged with the post-selection cost.
    pub pi0: T,
    pub std_error: T,
    pub amplitude: T,
    pub kept_fraction: T,
}

/// `points` equally spaced phases covering one fringe period 2π/N.
pub fn phi_grid<T: Real>(n: usize, points: usize) -> Vec<T> {
    let step = T::TAU() / T::c((n * points) as f64);
    (0..points).map(|j| T::c(j as f64) * step).collect()
}

fn atom_count<T: Real>(spec: &InitialStateSpec<T>, n: usize) -> Result<usize> {
    let len = match spec {
        InitialStateSpec::Product { amplitudes } => Some(amplitudes.len()),
        InitialStateSpec::Noise { theta, .. } => Some(theta.len()),
        _ => None,
    };
    match len {
        Some(l) if l != n => Err(domain("monte_carlo_parity", format!("initial state has {l} atoms, N = {n}"))),
        _ if n == 0 => Err(domain("monte_carlo_parity", "N must be >= 1")),
        _ => Ok(n),
    }
}

struct ShotContext<'a, T> {
    spec: &'a InitialStateSpec<T>,
    seq: &'a SequenceSpec<T>,
    cfg: &'a ShotConfig<T>,
    n: usize,
    thermal: Option<ThermalMomentum<T>>,
    pulses: usize,
    kinematic_phi: T,
}

fn random_sign<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    if rng.random::<bool>() {
        T::one()
    } else {
        -T::one()
    }
}

impl<T: Real> ShotContext<'_, T> {
    fn initial_state(&self, shot: u64) -> Result<InitialStateSpec<T>> {
        let Some(sp) = &self.cfg.state_prep else {
            return Ok(self.spec.clone());
        };
        let (c_g, c_e) = two_component(self.spec)
            .ok_or_else(|| Error::Contract("state-preparation noise needs a two-component entangled input".into()))?;
        let mut rng = stream(self.cfg.seed, shot, StreamSource::StatePrep, SHARED);
        if rng.random::<f64>() < sp.q_zeta.f64() {
            let mut theta = Vec::with_capacity(self.n);
            let mut varphi = Vec::with_capacity(self.n);
            for _ in 0..self.n {
                theta.push(T::c(rng.random::<f64>() * std::f64::consts::PI));
                varphi.push(T::c(rng.random::<f64>() * std::f64::consts::TAU));
            }
            return Ok(InitialStateSpec::Noise { theta, varphi });
        }
        let beta = WrappedNormal::new(T::zero(), sp.sigma_beta2)?.sample(&mut rng);
        Ok(InitialStateSpec::Entangled { c_g, c_e: c_e * Complex::from_polar(T::one(), beta) })
    }

    fn overrides(&self, shot: u64, phi: T) -> Result<Vec<PulseOverride<T>>> {
        let cfg = self.cfg;
        let mut ov = vec![PulseOverride::default(); self.pulses];
        if let Some(pa) = &cfg.pulse_area {
            let mut rng = stream(cfg.seed, shot, StreamSource::PulseArea, SHARED);
            let v = WrappedNormal::new(T::zero(), pa.sigma_v2)?.sample(&mut rng);
            let w = WrappedNormal::new(T::zero(), pa.sigma_w2)?.sample(&mut rng);
            let areas: &[T] = match self.seq.kind {
                SequenceKind::TwoPulse => &[w, v],
                SequenceKind::ThreePulse => &[v, w, v],
            };
            for (o, &a) in ov.iter_mut().zip(areas) {
                o.area_error = a;
            }
        }
        if let Some(lp) = &cfg.laser_phase {
            let mut rng = stream(cfg.seed, shot, StreamSource::LaserPhase, SHARED);
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            let rho = (5.0 - lp.r_corr.f64()) / 4.0;
            let s = lp.sigma_theta2.sqrt();
            let th_pi = s * T::c(z1);
            let th_half = s * T::c(rho * z1 + (1.0 - rho * rho).max(0.0).sqrt() * z2);
            // the last two pulses are the π pulse at T and the π/2 pulse at 2T
            let k = self.pulses;
            ov[k - 2].phase_offset = th_pi;
            ov[k - 1].phase_offset = th_half;
        }
        let last = self.pulses - 1;
        ov[last].phase_offset = ov[last].phase_offset + phi - self.kinematic_phi;
        Ok(ov)
    }

    /// One shot; `None` when an atom was lost.
    fn shot(&self, shot: u64, phi: T) -> Result<Option<T>> {
        let cfg = self.cfg;
        let n = self.n;
        if cfg.q_loss > T::zero() {
            let mut rng = stream(cfg.seed, shot, StreamSource::Loss, SHARED);
            if binomial(n, cfg.q_loss.f64(), &mut rng) > 0 {
                return Ok(None);
            }
        }
        let init = self.initial_state(shot)?;
        let ov = self.overrides(shot, phi)?;
        let mut mom = self.thermal.map(|_| stream(cfg.seed, shot, StreamSource::Momentum, SHARED));
        let mut totals = Vec::with_capacity(n);
        for _ in 0..n {
            let p = match (&self.thermal, mom.as_mut()) {
                (Some(th), Some(rng)) => th.sample(rng),
                _ => T::zero(),
            };
            totals.push(sequence_unitaries(self.seq, &cfg.atom, &cfg.drive, p, &ov)?.total);
        }
        let mut state = build_initial(&init, n, cfg.representation)?;
        state.apply_local_in_place(&totals)?;

        let mut value = match cfg.mode {
            ParityMode::Expectation => state.parity_expectation(),
            ParityMode::Projective => {
                let mut rng = stream(cfg.seed, shot, StreamSource::Projection, SHARED);
                let m = sample_excitation(&state.excitation_histogram(), &mut rng);
                if m % 2 == 0 {
                    T::one()
                } else {
                    -T::one()
                }
            }
        };
        if cfg.q_det > T::zero() {
            let mut rng = stream(cfg.seed, shot, StreamSource::Detection, SHARED);
            let f = binomial(n, cfg.q_det.f64(), &mut rng);
            match cfg.readout {
                ReadoutModel::RandomOnError if f > 0 => value = random_sign(&mut rng),
                ReadoutModel::RandomOnError => {}
                ReadoutModel::IndependentFlips if f % 2 == 1 => value = -value,
                ReadoutModel::IndependentFlips => {}
            }
        }
        if cfg.q_se > T::zero() {
            let mut rng = stream(cfg.seed, shot, StreamSource::Spontaneous, SHARED);
            if binomial(n, cfg.q_se.f64(), &mut rng) > 0 {
                value = random_sign(&mut rng);
            }
        }
        Ok(Some(value))
    }
}

/// Mean parity ± SE at each grid phase, with the fitted fringe amplitude.
///
/// The scanned phase is imposed on the last pulse so the fringe reads cos(Nφ) at
/// zero error, whatever the kinematic phase of `seq`.
pub fn monte_carlo_parity<T: Real>(
    spec: &InitialStateSpec<T>,
    seq: &SequenceSpec<T>,
    shots: &ShotConfig<T>,
    n: usize,
    grid: &[T],
) -> Result<FringeResult<T>> {
    shots.validate()?;
    let n = atom_count(spec, n)?;
    if grid.len() < 2 {
        return Err(domain("monte_carlo_parity", "phi-grid needs at least two points"));
    }
    if shots.representation == Representation::Dense && n > super::state::DENSE_CAP {
        return Err(Error::Capacity { n, cap: super::state::DENSE_CAP });
    }
    let thermal = match &shots.trap {
        Some(t) => Some(thermal_sigma(t, &shots.atom)?),
        None => None,
    };
    let ctx = ShotContext {
        spec,
        seq,
        cfg: shots,
        n,
        thermal,
        pulses: seq.schedule().len(),
        kinematic_phi: interferometer_phase(seq, &shots.atom),
    };
    let per_point = shots.shots_per_point(grid.len());
    let chunks_per_point = per_point.div_ceil(CHUNK);
    let jobs: Vec<(usize, u64)> =
        (0..grid.len()).flat_map(|j| (0..chunks_per_point).map(move |c| (j, c))).collect();
    let parts: Vec<Welford<T>> = jobs
        .par_iter()
        .map(|&(j, c)| {
            let mut acc = Welford::empty();
            let start = c * CHUNK;
            let end = (start + CHUNK).min(per_point);
            for s in start..end {
                match ctx.shot(j as u64 * per_point + s, grid[j])? {
                    Some(v) => acc.push(v),
                    None => acc.lost += 1,
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;

    let points: Vec<FringePoint<T>> = parts
        .chunks(chunks_per_point as usize)
        .zip(grid)
        .map(|(ch, &phi)| {
            let w = Welford::tree(ch.to_vec());
            let std_error = if w.count > 1 {
                let c = T::c(w.count as f64);
                (w.m2 / (c - T::one()) / c).sqrt()
            } else {
                T::infinity()
            };
            FringePoint { phi, mean: w.mean, std_error, kept: w.count, lost: w.lost }
        })
        .collect();
    fit_fringe_amplitude(n, points)
}

/// Least-squares A·cos(Nφ) + B·sin(Nφ) with SE propagated from the per-point SEs.
pub fn fit_fringe_amplitude<T: Real>(n: usize, points: Vec<FringePoint<T>>) -> Result<FringeResult<T>> {
    if let Some(p) = points.iter().find(|p| p.kept == 0) {
        return Err(domain("fit_fringe_amplitude", format!("every shot at phi = {} was lost", p.phi)));
    }
    let nn = T::c(n as f64);
    let (mut scc, mut scy, mut sss, mut ssy, mut var) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for p in &points {
        let (s, c) = (nn * p.phi).sin_cos();
        scc = scc + c * c;
        scy = scy + c * p.mean;
        sss = sss + s * s;
        ssy = ssy + s * p.mean;
        var = var + c * c * p.std_error * p.std_error;
    }
    if !(scc > T::zero()) {
        return Err(domain("fit_fringe_amplitude", "phi-grid does not resolve cos(N phi)"));
    }
    let kept: u64 = points.iter().map(|p| p.kept).sum();
    let total: u64 = kept + points.iter().map(|p| p.lost).sum::<u64>();
    let f = T::c(kept as f64 / total as f64);
    Ok(FringeResult {
        n,
        amplitude: scy / scc,
        amplitude_se: var.sqrt() / scc,
        quadrature: if sss > T::zero() { ssy / sss } else { T::zero() },
        kept_fraction: f,
        kept_fraction_se: (f * (T::one() - f) / T::c(total as f64)).sqrt(),
        points,
    })
}

/// Π₀ = A·√f with a delta-method SE.
pub fn estimate_pi0<T: Real>(fit: &FringeResult<T>) -> Pi0Estimate<T> {
    let f = fit.kept_fraction;
    let a = fit.amplitude;
    let var = f * fit.amplitude_se * fit.amplitude_se + a * a * fit.kept_fraction_se * fit.kept_fraction_se / (T::c(4.0) * f);
    Pi0Estimate { pi0: a * f.sqrt(), std_error: var.sqrt(), amplitude: a, kept_fraction: f }
}
