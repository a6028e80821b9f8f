//! CODATA constants and atomic species data.

use crate::scalar::Real;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;

/// Mass, effective Raman wave number and intermediate-level decay rate of an atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpecies<T> {
    pub name: String,
    /// kg
    pub mass: T,
    /// Effective wave number K, 1/m.
    pub wave_number: T,
    /// Intermediate-level decay rate γᵢ, rad/s.
    pub gamma_i: T,
}

impl<T: Real> AtomSpecies<T> {
    /// ¹³³Cs driven on the D2 line.
    pub fn cs133() -> Self {
        Self {
            name: "Cs133".into(),
            mass: T::c(132.905_45 * AMU),
            wave_number: T::c(1.4743e7),
            gamma_i: T::c(2.0 * std::f64::consts::PI * 5.234e6),
        }
    }

    /// Recoil-free Doppler detuning −pK/m for momentum `p` along K.
    #[inline]
    pub fn doppler_detuning(&self, p: T) -> T {
        -(p * self.wave_number) / self.mass
    }
}
