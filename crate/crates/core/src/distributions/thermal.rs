use rand::Rng;
use rand_distr::StandardNormal;

use crate::constants::{AtomSpecies, HBAR, K_B};
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Harmonic trap holding one atom before release.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig<T> {
    /// Trap frequency ν, Hz.
    pub nu_trap: T,
    /// Temperature, K.
    pub temperature: T,
}

impl<T: Real> TrapConfig<T> {
    pub fn new(nu_trap: T, temperature: T) -> Result<Self> {
        let t = Self { nu_trap, temperature };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu_trap > T::zero()) || !self.nu_trap.is_finite() {
            return Err(domain("TrapConfig", format!("nu_trap must be > 0, got {}", self.nu_trap)));
        }
        if !(self.temperature >= T::zero()) || !self.temperature.is_finite() {
            return Err(domain("TrapConfig", format!("temperature must be >= 0, got {}", self.temperature)));
        }
        Ok(())
    }

    /// ω = 2πν.
    #[inline]
    pub fn omega(&self) -> T {
        T::TAU() * self.nu_trap
    }

    /// ħω / k_B𝒯, infinite at zero temperature.
    fn beta_hbar_omega(&self) -> T {
        if self.temperature == T::zero() {
            return T::infinity();
        }
        // split the constants so f32 stays in range
        (T::c(HBAR / K_B) * self.omega()) / self.temperature
    }

    /// Boltzmann factor z = exp(−ħω/k_B𝒯).
    pub fn boltzmann_factor(&self) -> T {
        (-self.beta_hbar_omega()).exp()
    }

    /// σ_p = √(ħmω).
    pub fn sigma_p(&self, atom: &AtomSpecies<T>) -> T {
        T::c(HBAR).sqrt() * (atom.mass * self.omega()).sqrt()
    }

    /// σ_x = √(ħ/mω).
    pub fn sigma_x(&self, atom: &AtomSpecies<T>) -> T {
        T::c(HBAR).sqrt() / (atom.mass * self.omega()).sqrt()
    }
}

/// Mean vibrational occupation ⟨n⟩ = 1/(e^{ħω/k_B𝒯} − 1); zero at 𝒯 = 0.
pub fn mean_occupation<T: Real>(trap: &TrapConfig<T>) -> Result<T> {
    trap.validate()?;
    let x = trap.beta_hbar_omega();
    if x.is_infinite() {
        return Ok(T::zero());
    }
    Ok(x.exp_m1().recip())
}

/// Thermal momentum spread along K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMomentum<T> {
    /// kg·m/s
    pub sigma_th: T,
}

impl<T: Real> ThermalMomentum<T> {
    pub fn new(sigma_th: T) -> Result<Self> {
        if !(sigma_th > T::zero()) || !sigma_th.is_finite() {
            return Err(domain("ThermalMomentum", format!("sigma_th must be > 0, got {sigma_th}")));
        }
        Ok(Self { sigma_th })
    }

    pub fn pdf(&self, p: T) -> T {
        let u = p / self.sigma_th;
        (-(u * u) / T::c(2.0)).exp() / (self.sigma_th * T::TAU().sqrt())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let z: f64 = rng.sample(StandardNormal);
        self.sigma_th * T::c(z)
    }
}

/// σ_th = σ_p √(⟨n⟩ + ½).
pub fn thermal_sigma<T: Real>(trap: &TrapConfig<T>, atom: &AtomSpecies<T>) -> Result<ThermalMomentum<T>> {
    let n = mean_occupation(trap)?;
    ThermalMomentum::new(trap.sigma_p(atom) * (n + T::c(0.5)).sqrt())
}

/// ⟨E_vib⟩ = ħω(⟨n⟩ + ½), J.
pub fn vib_energy<T: Real>(trap: &TrapConfig<T>) -> Result<T> {
    let n = mean_occupation(trap)?;
    Ok(T::c(HBAR) * trap.omega() * (n + T::c(0.5)))
}
