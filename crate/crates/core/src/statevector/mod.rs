//! N-atom spin simulator and Monte Carlo oracle for the closed-form parity amplitudes.

pub mod analytic;
pub mod montecarlo;
pub mod readout;
pub mod state;

pub use analytic::{
    entangled_parity, ideal_terms, parity_analytic_reference, product_parity, pulse_area_averaged, pulse_area_terms,
    AtomTerms, ErrorDraws,
};
pub use montecarlo::{
    estimate_pi0, fit_fringe_amplitude, monte_carlo_parity, phi_grid, FringePoint, FringeResult, LaserPhaseNoise,
    ParityMode, Pi0Estimate, PulseAreaNoise, ReadoutModel, ShotConfig, StatePrepNoise,
};
pub use readout::{simulate_readout, ReadoutOutcome};
pub use state::{
    apply_local, build_initial, excitation_histogram, parity_expectation, parity_from_histogram, DenseState,
    InitialStateSpec, ProductSum, ProductTerm, Qubit, Representation, SpinState, DENSE_CAP,
};
