//! Two-level Raman pulse unitaries and interferometer sequences.
//!
//! Basis order is {|g, p⟩, |e, p + ħK⟩}. Free evolution between pulses is the
//! identity in the co-evolving frame, so a sequence is just the product of its pulses.

use std::ops::Mul;

use num_complex::Complex;

use crate::constants::AtomSpecies;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Laser phase convention φ₁₂ = −π/2.
pub fn default_phi12<T: Real>() -> T {
    -T::FRAC_PI_2()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2<T> {
    /// Row-major: m[0][0] = U_gg, m[0][1] = U_ge, m[1][0] = U_eg, m[1][1] = U_ee.
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Unitary2<T> {
    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { m: [[o, z], [z, o]] }
    }

    pub fn gg(&self) -> Complex<T> {
        self.m[0][0]
    }
    pub fn ge(&self) -> Complex<T> {
        self.m[0][1]
    }
    pub fn eg(&self) -> Complex<T> {
        self.m[1][0]
    }
    pub fn ee(&self) -> Complex<T> {
        self.m[1][1]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.m;
        Self { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entry of |U†U − 1|.
    pub fn unitarity_defect(&self) -> T {
        let p = self.dagger() * *self;
        let mut worst = T::zero();
        for (i, row) in p.m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((v - Complex::new(target, T::zero())).norm());
            }
        }
        worst
    }

    /// Acts on the single-atom amplitudes (c_g, c_e).
    #[inline]
    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1]]
    }

    /// 2·U_gg*·U_ge, the coherence that carries the parity signal.
    #[inline]
    pub fn parity_coherence(&self) -> Complex<T> {
        self.gg().conj() * self.ge() * T::c(2.0)
    }

    /// |U_gg|² − |U_eg|².
    #[inline]
    pub fn parity_population(&self) -> T {
        self.gg().norm_sqr() - self.eg().norm_sqr()
    }
}

impl<T: Real> Mul for Unitary2<T> {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let a = &self.m;
        let b = &r.m;
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }
}

/// One Raman pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec<T> {
    /// Ω_eff, rad/s.
    pub omega_eff: T,
    /// A = Ω_eff τ, rad.
    pub area: T,
    /// δ′₁₂ = δ₁₂ − δ^AC, rad/s.
    pub detuning: T,
    /// Accumulated detuning phase φ_t at the pulse start, rad.
    pub phi_t: T,
    /// Laser phase difference φ₁₂, rad.
    pub phi12: T,
    /// Differential light shift δ^AC, rad/s.
    pub stark_shift: T,
}

impl<T: Real> PulseSpec<T> {
    pub fn resonant(omega_eff: T, area: T, phi_t: T) -> Self {
        Self { omega_eff, area, detuning: T::zero(), phi_t, phi12: default_phi12(), stark_shift: T::zero() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_eff > T::zero()) {
            return Err(domain("PulseSpec", format!("omega_eff must be > 0, got {}", self.omega_eff)));
        }
        if !(self.area > T::zero()) {
            return Err(domain("PulseSpec", format!("area must be > 0, got {}", self.area)));
        }
        Ok(())
    }

    /// Pulse duration τ = A/Ω_eff.
    pub fn duration(&self) -> T {
        self.area / self.omega_eff
    }
}

/// Detuned pulse evolution operator, global light-shift phase omitted.
pub fn pulse_unitary_general<T: Real>(p: &PulseSpec<T>) -> Unitary2<T> {
    let tau = p.duration();
    let omega_r = p.omega_eff.hypot(p.detuning);
    let sin_t = p.omega_eff / omega_r;
    let cos_t = -p.detuning / omega_r;
    let a = omega_r * tau / T::c(2.0);
    let (sa, ca) = a.sin_cos();
    let delta12 = p.detuning + p.stark_shift;
    let pre = Complex::from_polar(T::one(), delta12 * tau / T::c(2.0));
    let laser = Complex::from_polar(T::one(), p.phi_t + p.phi12);
    let mi = Complex::new(T::zero(), -T::one());
    let gg = pre * Complex::new(ca, cos_t * sa);
    let ee = pre.conj() * Complex::new(ca, -cos_t * sa);
    let ge = mi * pre * laser * (sin_t * sa);
    let eg = mi * pre.conj() * laser.conj() * (sin_t * sa);
    Unitary2 { m: [[gg, ge], [eg, ee]] }
}

/// Resonant rotation by `area` with φ₁₂ = −π/2.
pub fn pulse_unitary_ideal<T: Real>(area: T, phi_t: T) -> Unitary2<T> {
    let (s, c) = (area / T::c(2.0)).sin_cos();
    let e = Complex::from_polar(T::one(), phi_t);
    let cc = Complex::new(c, T::zero());
    Unitary2 { m: [[cc, -e * s], [e.conj() * s, cc]] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// π/2–π–π/2 on independent atoms.
    ThreePulse,
    /// π–π/2 following GHZ preparation.
    TwoPulse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceSpec<T> {
    pub kind: SequenceKind,
    /// Free-evolution time T, s.
    pub free_time: T,
    /// Acceleration along K, m/s².
    pub acceleration: T,
    /// Laser chirp rate b, rad/s².
    pub chirp_rate: T,
}

impl<T: Real> SequenceSpec<T> {
    pub fn new(kind: SequenceKind, free_time: T, acceleration: T, chirp_rate: T) -> Result<Self> {
        if !(free_time > T::zero()) {
            return Err(domain("SequenceSpec", format!("free_time must be > 0, got {free_time}")));
        }
        Ok(Self { kind, free_time, acceleration, chirp_rate })
    }

    /// Chirp b = (1 + ε)Ka.
    pub fn with_epsilon(kind: SequenceKind, free_time: T, acceleration: T, epsilon: T, atom: &AtomSpecies<T>) -> Result<Self> {
        Self::new(kind, free_time, acceleration, (T::one() + epsilon) * atom.wave_number * acceleration)
    }

    /// Residual chirp b − Ka, rad/s².
    pub fn chirp_residual(&self, atom: &AtomSpecies<T>) -> T {
        self.chirp_rate - atom.wave_number * self.acceleration
    }

    /// Pulse times and nominal areas in time order.
    pub fn schedule(&self) -> Vec<(T, T)> {
        let t = self.free_time;
        let (h, f) = (T::FRAC_PI_2(), T::PI());
        match self.kind {
            SequenceKind::ThreePulse => vec![(T::zero(), h), (t, f), (t + t, h)],
            SequenceKind::TwoPulse => vec![(t, f), (t + t, h)],
        }
    }
}

/// φ = (b − Ka)T².
pub fn interferometer_phase<T: Real>(seq: &SequenceSpec<T>, atom: &AtomSpecies<T>) -> T {
    seq.chirp_residual(atom) * seq.free_time * seq.free_time
}

/// δ′₁₂ at time `t` for an atom with momentum `p`.
pub fn pulse_detuning<T: Real>(seq: &SequenceSpec<T>, atom: &AtomSpecies<T>, p: T, t: T) -> T {
    atom.doppler_detuning(p) + seq.chirp_residual(atom) * t
}

/// φ_t = (δ₀ + δ^AC)t + ½(b − Ka)t².
pub fn accumulated_phase<T: Real>(seq: &SequenceSpec<T>, atom: &AtomSpecies<T>, p: T, stark_shift: T, t: T) -> T {
    (atom.doppler_detuning(p) + stark_shift) * t + seq.chirp_residual(atom) * t * t / T::c(2.0)
}

/// How pulses are modelled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive<T> {
    /// Resonant rotations; detuning enters only through φ_t.
    Ideal,
    /// Full detuned evolution at finite Rabi frequency.
    General { omega_eff: T, stark_shift: T },
}

/// Per-pulse deviations from the nominal sequence.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PulseOverride<T> {
    /// Added to the nominal area, rad.
    pub area_error: T,
    /// Added to the laser phase seen by the atom, rad.
    pub phase_offset: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequencePulses<T> {
    /// Pulse unitaries in time order.
    pub unitaries: Vec<Unitary2<T>>,
    pub times: Vec<T>,
    /// φ_t at each pulse, offsets included.
    pub phases: Vec<T>,
    /// φ = φ_{2T} − 2φ_T from kinematics alone.
    pub phi: T,
    /// Product of all pulses, last pulse leftmost.
    pub total: Unitary2<T>,
}

/// Builds the pulse list for one atom of momentum `p`.
pub fn sequence_unitaries<T: Real>(
    seq: &SequenceSpec<T>,
    atom: &AtomSpecies<T>,
    drive: &Drive<T>,
    p: T,
    overrides: &[PulseOverride<T>],
) -> Result<SequencePulses<T>> {
    let sched = seq.schedule();
    if !overrides.is_empty() && overrides.len() != sched.len() {
        return Err(domain(
            "sequence_unitaries",
            format!("expected {} pulse overrides, got {}", sched.len(), overrides.len()),
        ));
    }
    let stark = match drive {
        Drive::Ideal => T::zero(),
        Drive::General { stark_shift, .. } => *stark_shift,
    };
    let mut unitaries = Vec::with_capacity(sched.len());
    let mut times = Vec::with_capacity(sched.len());
    let mut phases = Vec::with_capacity(sched.len());
    let mut total = Unitary2::identity();
    for (i, &(t, area)) in sched.iter().enumerate() {
        let ov = overrides.get(i).copied().unwrap_or_default();
        let phi_t = accumulated_phase(seq, atom, p, stark, t) + ov.phase_offset;
        let area = area + ov.area_error;
        let u = match drive {
            Drive::Ideal => pulse_unitary_ideal(area, phi_t),
            Drive::General { omega_eff, stark_shift } => {
                let spec = PulseSpec {
                    omega_eff: *omega_eff,
                    area,
                    detuning: pulse_detuning(seq, atom, p, t),
                    phi_t,
                    // keeps φ₁₂ + δ^AC τ/2 = −π/2
                    phi12: default_phi12::<T>() - *stark_shift * area / *omega_eff / T::c(2.0),
                    stark_shift: *stark_shift,
                };
                spec.validate()?;
                pulse_unitary_general(&spec)
            }
        };
        total = u * total;
        unitaries.push(u);
        times.push(t);
        phases.push(phi_t);
    }
    let t = seq.free_time;
    let phi = accumulated_phase(seq, atom, p, stark, t + t) - T::c(2.0) * accumulated_phase(seq, atom, p, stark, t);
    Ok(SequencePulses { unitaries, times, phases, phi, total })
}
