//! Wrapped-normal angles, thermal momentum and Gaussian expectation values.

pub mod quadrature;
pub mod thermal;
pub mod wrapped_normal;

pub use quadrature::{
    expect_gaussian, expect_over_momentum, gauss_hermite_rule, Expectation, GaussHermiteRule, QuadratureScheme,
    QuadratureSpec,
};
pub use thermal::{mean_occupation, thermal_sigma, vib_energy, ThermalMomentum, TrapConfig};
pub use wrapped_normal::{wn_pdf, wn_sample, wrap_angle, WrappedNormal};
