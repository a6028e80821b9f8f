use rand::Rng;
use rand::distr::weighted::WeightedIndex;
use rand_distr::{Binomial, Distribution};

use crate::error::{domain, Result};
use crate::scalar::Real;

use super::state::SpinState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadoutOutcome {
    /// Number of atoms reported in |e⟩.
    Detected(usize),
    /// At least one atom was lost; the shot is discarded.
    Lost,
}

fn check_prob<T: Real>(what: &str, q: T) -> Result<f64> {
    let q = q.f64();
    if !(0.0..=1.0).contains(&q) {
        return Err(domain("simulate_readout", format!("{what} must lie in [0, 1], got {q}")));
    }
    Ok(q)
}

pub(crate) fn binomial<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> usize {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n as u64, p).expect("validated probability").sample(rng) as usize
}

/// Samples M from a histogram of excitation numbers.
pub(crate) fn sample_excitation<T: Real, R: Rng + ?Sized>(hist: &[T], rng: &mut R) -> usize {
    let w: Vec<f64> = hist.iter().map(|p| p.f64().max(0.0)).collect();
    WeightedIndex::new(&w).map(|d| d.sample(rng)).unwrap_or(0)
}

/// Excited count after each atom's reported level flips with probability `q_det`.
pub(crate) fn flip_levels<R: Rng + ?Sized>(n: usize, m: usize, q_det: f64, rng: &mut R) -> usize {
    let down = binomial(m, q_det, rng);
    let up = binomial(n - m, q_det, rng);
    m - down + up
}

/// One projective readout: loss, then a basis-state draw, then independent level flips.
pub fn simulate_readout<T: Real, R: Rng + ?Sized>(
    state: &SpinState<T>,
    q_det: T,
    q_loss: T,
    rng: &mut R,
) -> Result<ReadoutOutcome> {
    let q_det = check_prob("q_det", q_det)?;
    let q_loss = check_prob("q_loss", q_loss)?;
    let n = state.n();
    if binomial(n, q_loss, rng) > 0 {
        return Ok(ReadoutOutcome::Lost);
    }
    let m = sample_excitation(&state.excitation_histogram(), rng);
    Ok(ReadoutOutcome::Detected(flip_levels(n, m, q_det, rng)))
}
