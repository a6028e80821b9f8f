use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};
use crate::scalar::Real;

/// Above this σ the Fourier series converges faster than the image sum.
const SERIES_SWITCH_SIGMA: f64 = 2.0;
const TERM_CUTOFF: f64 = 1e-16;
const MAX_TERMS: usize = 10_000;

/// Normal distribution wrapped onto the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedNormal<T> {
    pub mean: T,
    pub variance: T,
}

/// Reduces an angle into [−π, π).
#[inline]
pub fn wrap_angle<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let w = x - two_pi * ((x + T::PI()) / two_pi).floor();
    // floor rounding can land exactly on +π
    if w >= T::PI() {
        w - two_pi
    } else {
        w
    }
}

impl<T: Real> WrappedNormal<T> {
    pub fn new(mean: T, variance: T) -> Result<Self> {
        if !(variance >= T::zero()) || !variance.is_finite() {
            return Err(domain("WrappedNormal", format!("variance must be finite and >= 0, got {variance}")));
        }
        Ok(Self { mean, variance })
    }

    /// E[cos(θ − μ)] = e^{−σ²/2}.
    #[inline]
    pub fn mean_resultant_length(&self) -> T {
        (-self.variance / T::c(2.0)).exp()
    }

    /// Image-sum form Σ_j φ_σ(θ − μ + 2πj).
    pub fn pdf_series(&self, theta: T) -> T {
        let d = wrap_angle(theta - self.mean);
        let s2 = self.variance;
        if s2 == T::zero() {
            return if d == T::zero() { T::infinity() } else { T::zero() };
        }
        let norm = (T::TAU() * s2).sqrt().recip();
        let term = |j: i64| {
            let x = d + T::TAU() * T::c(j as f64);
            norm * (-(x * x) / (T::c(2.0) * s2)).exp()
        };
        let mut sum = term(0);
        for j in 1..MAX_TERMS as i64 {
            let t = term(j) + term(-j);
            sum = sum + t;
            if t < T::c(TERM_CUTOFF) {
                break;
            }
        }
        sum
    }

    /// Fourier form (1/2π)Σ_n e^{in(θ−μ) − n²σ²/2}.
    pub fn pdf_fourier(&self, theta: T) -> T {
        let d = wrap_angle(theta - self.mean);
        let half = self.variance / T::c(2.0);
        let mut sum = T::one();
        for n in 1..MAX_TERMS {
            let nf = T::c(n as f64);
            let damp = (-(nf * nf) * half).exp();
            if damp < T::c(TERM_CUTOFF) {
                break;
            }
            sum = sum + T::c(2.0) * damp * (nf * d).cos();
        }
        sum / T::TAU()
    }

    pub fn pdf(&self, theta: T) -> T {
        if self.variance <= T::c(SERIES_SWITCH_SIGMA * SERIES_SWITCH_SIGMA) {
            self.pdf_series(theta)
        } else {
            self.pdf_fourier(theta)
        }
    }

    /// Draws a normal deviate and wraps it into [−π, π). Zero variance returns the mean untouched.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        if self.variance == T::zero() {
            return self.mean;
        }
        let z: f64 = rng.sample(StandardNormal);
        wrap_angle(self.mean + self.variance.sqrt() * T::c(z))
    }
}

/// Wrapped-normal density at `theta`.
pub fn wn_pdf<T: Real>(theta: T, d: &WrappedNormal<T>) -> Result<T> {
    WrappedNormal::new(d.mean, d.variance)?;
    Ok(d.pdf(theta))
}

/// One wrapped-normal draw from the caller's generator.
pub fn wn_sample<T: Real, R: Rng + ?Sized>(d: &WrappedNormal<T>, rng: &mut R) -> T {
    d.sample(rng)
}
