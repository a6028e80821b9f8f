//! Closed-form per-realization parity for product and two-component entangled inputs.

use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::pulse::SequenceKind;
use crate::scalar::Real;

use super::state::{InitialStateSpec, Qubit};

/// One realization of the errors entering the closed forms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorDraws<T> {
    /// Pulse-area errors (v, w) on the π/2 and π pulses of the two-pulse sequence.
    pub area_errors: Option<(T, T)>,
    /// Per-atom φ_T; required with `area_errors`, where φ_{2T} = φ_k + 2φ_T.
    pub phi_t: Vec<T>,
}

/// Per-atom terms x_k = 2U_gg*U_ge and y_k = |U_gg|² − |U_eg|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomTerms<T> {
    pub x: Complex<T>,
    pub y: T,
}

/// x_k, y_k of the ideal sequences as functions of φ_k alone.
pub fn ideal_terms<T: Real>(kind: SequenceKind, phi_k: T) -> AtomTerms<T> {
    let (s, c) = phi_k.sin_cos();
    match kind {
        SequenceKind::ThreePulse => AtomTerms { x: Complex::new(T::zero(), -s), y: c },
        SequenceKind::TwoPulse => AtomTerms { x: Complex::new(c, -s), y: T::zero() },
    }
}

/// Exact x_k, y_k of the two-pulse sequence with area errors v (π/2) and w (π).
pub fn pulse_area_terms<T: Real>(v: T, w: T, phi_t: T, phi_2t: T) -> AtomTerms<T> {
    let (sv, cv) = v.sin_cos();
    let (sw, cw) = w.sin_cos();
    let (sh, ch) = (w / T::c(2.0)).sin_cos();
    let phi_k = phi_2t - phi_t - phi_t;
    let e = |a: T| Complex::from_polar(T::one(), a);
    let x = e(phi_2t) * (-cv * sh * sh) - e(phi_t) * (sv * sw) + e(-phi_k) * (cv * ch * ch);
    let y = cv * sw * (phi_2t - phi_t).cos() + sv * cw;
    AtomTerms { x, y }
}

/// Π_k [2Re(c_g^(k)* c_e^(k) x_k) + (|c_g^(k)|² − |c_e^(k)|²) y_k].
pub fn product_parity<T: Real>(amplitudes: &[Qubit<T>], terms: &[AtomTerms<T>]) -> T {
    amplitudes
        .iter()
        .zip(terms)
        .map(|(q, t)| {
            let two = T::c(2.0);
            two * (q[0].conj() * q[1] * t.x).re + (q[0].norm_sqr() - q[1].norm_sqr()) * t.y
        })
        .fold(T::one(), |a, b| a * b)
}

/// 2Re[c_g* c_e Π x_k] + [|c_g|² + (−1)^N |c_e|²] Π y_k.
pub fn entangled_parity<T: Real>(c_g: Complex<T>, c_e: Complex<T>, terms: &[AtomTerms<T>]) -> T {
    let px = terms.iter().fold(Complex::new(T::one(), T::zero()), |a, t| a * t.x);
    let py = terms.iter().fold(T::one(), |a, t| a * t.y);
    let sign = if terms.len() % 2 == 0 { T::one() } else { -T::one() };
    T::c(2.0) * (c_g.conj() * c_e * px).re + (c_g.norm_sqr() + sign * c_e.norm_sqr()) * py
}

/// Pulse-area form after the momentum average removes the fast terms.
pub fn pulse_area_averaged<T: Real>(c_g: Complex<T>, c_e: Complex<T>, n: usize, v: T, w: T, sum_phi: T) -> T {
    let nn = n as i32;
    let lead = v.cos().powi(nn) * (w / T::c(2.0)).cos().powi(2 * nn);
    let sign = if n % 2 == 0 { T::one() } else { -T::one() };
    let tail = v.sin().powi(nn) * w.cos().powi(nn);
    T::c(2.0) * lead * (c_g.conj() * c_e * Complex::from_polar(T::one(), -sum_phi)).re
        + (c_g.norm_sqr() + sign * c_e.norm_sqr()) * tail
}

pub(crate) fn two_component<T: Real>(spec: &InitialStateSpec<T>) -> Option<(Complex<T>, Complex<T>)> {
    let h = T::FRAC_1_SQRT_2();
    match spec {
        InitialStateSpec::Ghz => Some((Complex::new(h, T::zero()), Complex::new(h, T::zero()))),
        InitialStateSpec::GhzPhase { beta } => Some((Complex::new(h, T::zero()), Complex::from_polar(h, *beta))),
        InitialStateSpec::Entangled { c_g, c_e } => Some((*c_g, *c_e)),
        _ => None,
    }
}

fn product_amplitudes<T: Real>(spec: &InitialStateSpec<T>, n: usize) -> Result<Option<Vec<Qubit<T>>>> {
    match spec {
        InitialStateSpec::Product { .. } | InitialStateSpec::Noise { .. } => {
            let ps = spec.product_sum(n)?;
            Ok(ps.terms.into_iter().next().map(|t| t.atoms))
        }
        _ => Ok(None),
    }
}

/// Closed-form parity for one error realization, given the per-atom phases φ_k.
pub fn parity_analytic_reference<T: Real>(
    spec: &InitialStateSpec<T>,
    kind: SequenceKind,
    phi: &[T],
    draws: &ErrorDraws<T>,
) -> Result<T> {
    let n = phi.len();
    if n == 0 {
        return Err(domain("parity_analytic_reference", "need at least one atom phase"));
    }
    let terms: Vec<AtomTerms<T>> = match draws.area_errors {
        None => phi.iter().map(|&p| ideal_terms(kind, p)).collect(),
        Some((v, w)) => {
            if kind != SequenceKind::TwoPulse {
                return Err(Error::Contract("pulse-area closed form covers the two-pulse sequence only".into()));
            }
            if draws.phi_t.len() != n {
                return Err(domain("parity_analytic_reference", "phi_t must have one entry per atom"));
            }
            phi.iter()
                .zip(&draws.phi_t)
                .map(|(&pk, &pt)| pulse_area_terms(v, w, pt, pk + pt + pt))
                .collect()
        }
    };
    if let Some((c_g, c_e)) = two_component(spec) {
        return Ok(entangled_parity(c_g, c_e, &terms));
    }
    match product_amplitudes(spec, n)? {
        Some(amps) => Ok(product_parity(&amps, &terms)),
        None => Err(Error::Contract("unsupported initial state for the closed forms".into())),
    }
}
