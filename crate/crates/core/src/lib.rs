//! Error budget for GHZ-enhanced atom interferometry: pulse dynamics, closed-form parity
//! amplitudes per error source, thermal momentum spread, and a state-vector Monte Carlo oracle.
//!
//! Everything is generic over [`scalar::Real`]; the aliases below fix the scalar to `f64`.

pub mod constants;
pub mod distributions;
pub mod error;
pub mod error_models;
pub mod momentum;
pub mod pulse;
pub mod rng;
pub mod scalar;
pub mod statevector;

pub use error::{Error, Result};
pub use scalar::Real;

pub type AtomSpecies = constants::AtomSpecies<f64>;
pub type TrapConfig = distributions::TrapConfig<f64>;
pub type ThermalMomentum = distributions::ThermalMomentum<f64>;
pub type WrappedNormal = distributions::WrappedNormal<f64>;
pub type Unitary2 = pulse::Unitary2<f64>;
pub type PulseSpec = pulse::PulseSpec<f64>;
pub type SequenceSpec = pulse::SequenceSpec<f64>;
pub type Drive = pulse::Drive<f64>;
pub type ParityModel = error_models::ParityModel<f64>;
pub type ErrorBudget = error_models::ErrorBudget<f64>;
pub type RamanConfig = momentum::RamanConfig<f64>;
pub type EtaResult = momentum::EtaResult<f64>;
pub type ChirpCorrection = momentum::ChirpCorrection<f64>;
pub type SpinState = statevector::SpinState<f64>;
pub type InitialStateSpec = statevector::InitialStateSpec<f64>;
pub type ShotConfig = statevector::ShotConfig<f64>;
pub type FringeResult = statevector::FringeResult<f64>;
pub type Pi0Estimate = statevector::Pi0Estimate<f64>;
