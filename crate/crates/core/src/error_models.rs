//! Closed-form parity amplitudes Π₀ for each error source, their composition, and the
//! resulting phase uncertainty.

use crate::constants::AtomSpecies;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

/// Π₀ for one source (or a composition) at fixed N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityModel<T> {
    pub n: u64,
    pub pi0_exact: T,
    pub pi0_small_error: T,
}

impl<T: Real> ParityModel<T> {
    fn new(n: u64, pi0_exact: T, pi0_small_error: T) -> Self {
        Self { n, pi0_exact, pi0_small_error }
    }

    /// Dark-fringe Δφ = 1/(Π₀N) from the exact amplitude.
    pub fn dark_fringe_uncertainty(&self) -> T {
        (self.pi0_exact * T::c(self.n as f64)).recip()
    }

    /// Error ε = 1 − Π₀ of the exact amplitude.
    pub fn error(&self) -> T {
        T::one() - self.pi0_exact
    }
}

fn check_prob<T: Real>(what: &'static str, name: &str, q: T, allow_one: bool) -> Result<()> {
    let ok = q >= T::zero() && if allow_one { q <= T::one() } else { q < T::one() };
    if ok {
        Ok(())
    } else {
        let range = if allow_one { "[0, 1]" } else { "[0, 1)" };
        Err(domain(what, format!("{name} must lie in {range}, got {q}")))
    }
}

fn check_var<T: Real>(what: &'static str, name: &str, v: T) -> Result<()> {
    if v >= T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(domain(what, format!("{name} must be finite and >= 0, got {v}")))
    }
}

fn check_n(what: &'static str, n: u64) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(domain(what, "N must be >= 1"))
    }
}

#[inline]
fn nf<T: Real>(n: u64) -> T {
    T::c(n as f64)
}

/// Imperfect GHZ preparation: noise admixture q_ζ and relative-phase variance σ_β².
pub fn pi0_state_prep<T: Real>(n: u64, q_zeta: T, sigma_beta2: T) -> Result<ParityModel<T>> {
    check_n("pi0_state_prep", n)?;
    check_prob("pi0_state_prep", "q_zeta", q_zeta, true)?;
    check_var("pi0_state_prep", "sigma_beta2", sigma_beta2)?;
    let half = sigma_beta2 / T::c(2.0);
    Ok(ParityModel::new(n, (T::one() - q_zeta) * (-half).exp(), T::one() - (q_zeta + half)))
}

/// Π₀ = 2F̄ − 1.
pub fn fidelity_to_pi0<T: Real>(fidelity: T) -> Result<T> {
    if !(fidelity >= T::c(0.5) && fidelity <= T::one()) {
        return Err(domain("fidelity_to_pi0", format!("fidelity must lie in [1/2, 1], got {fidelity}")));
    }
    Ok(T::c(2.0) * fidelity - T::one())
}

/// F̄ = (1 + Π₀)/2.
pub fn pi0_to_fidelity<T: Real>(pi0: T) -> Result<T> {
    if !(pi0 >= T::zero() && pi0 <= T::one()) {
        return Err(domain("pi0_to_fidelity", format!("pi0 must lie in [0, 1], got {pi0}")));
    }
    Ok((T::one() + pi0) / T::c(2.0))
}

/// Pulse-area variances (σ_v², σ_w²) = (ξ²π/2, ξ²π) for the π/2 and π pulses.
pub fn pulse_area_variances<T: Real>(xi: T) -> (T, T) {
    let s = xi * xi * T::PI();
    (s / T::c(2.0), s)
}

/// Σ_m C(n,m) g(m) / Σ_m C(n,m), summed outward from the central coefficient with
/// binomial ratios; terms below 1e−18 of the centre are dropped.
fn binomial_average<T: Real>(n: u64, g: impl Fn(u64) -> T) -> T {
    let cutoff = T::c(1e-18);
    let m0 = n / 2;
    let mut num = g(m0);
    let mut den = T::one();
    let mut t = T::one();
    let mut m = m0;
    while m < n {
        t = t * T::c((n - m) as f64) / T::c((m + 1) as f64);
        m += 1;
        if t < cutoff {
            break;
        }
        num = num + t * g(m);
        den = den + t;
    }
    t = T::one();
    m = m0;
    while m > 0 {
        t = t * T::c(m as f64) / T::c((n - m + 1) as f64);
        m -= 1;
        if t < cutoff {
            break;
        }
        num = num + t * g(m);
        den = den + t;
    }
    num / den
}

/// Exact Π₀ under wrapped-normal pulse-area noise, as the product of two binomial averages.
pub fn pi0_pulse_area_exact<T: Real>(n: u64, sigma_v2: T, sigma_w2: T) -> Result<ParityModel<T>> {
    check_n("pi0_pulse_area_exact", n)?;
    check_var("pi0_pulse_area_exact", "sigma_v2", sigma_v2)?;
    check_var("pi0_pulse_area_exact", "sigma_w2", sigma_w2)?;
    let two = T::c(2.0);
    let v = binomial_average(n, |m| {
        let k = T::c(n as f64 - 2.0 * m as f64);
        (-(k * k) * sigma_v2 / two).exp()
    });
    let w = binomial_average(2 * n, |m| {
        let k = T::c(n as f64 - m as f64);
        (-(k * k) * sigma_w2 / two).exp()
    });
    let small = T::one() - nf::<T>(n) * (sigma_v2 / two + sigma_w2 / T::c(4.0));
    Ok(ParityModel::new(n, v * w, small))
}

/// Large-N forms of the pulse-area amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseAreaAsymptotic<T> {
    pub n: u64,
    /// (1 + Nσ_v²)^{−1/2}(1 + Nσ_w²/2)^{−1/2}
    pub variance_form: T,
    /// (1 + Nξ²π/2)^{−1}
    pub xi_form: T,
    /// 1 − Nξ²π/2
    pub small_error: T,
}

impl<T: Real> PulseAreaAsymptotic<T> {
    pub fn model(&self) -> ParityModel<T> {
        ParityModel::new(self.n, self.variance_form, self.small_error)
    }
}

/// Asymptotic pulse-area amplitude for N ≫ 1 (N ≥ 10 enforced).
pub fn pi0_pulse_area_asymptotic<T: Real>(n: u64, xi: T) -> Result<PulseAreaAsymptotic<T>> {
    if n < 10 {
        return Err(domain("pi0_pulse_area_asymptotic", format!("requires N >= 10, got {n}")));
    }
    if n < 100 {
        log::warn!("pulse-area asymptotic form used at N = {n}; it is accurate only for N >> 1");
    }
    check_var("pi0_pulse_area_asymptotic", "xi", xi)?;
    let (sv2, sw2) = pulse_area_variances(xi);
    let nn = nf::<T>(n);
    let x = nn * xi * xi * T::PI() / T::c(2.0);
    Ok(PulseAreaAsymptotic {
        n,
        variance_form: pulse_area_variance_form(n, sv2, sw2),
        xi_form: (T::one() + x).recip(),
        small_error: T::one() - x,
    })
}

/// (1 + Nσ_v²)^{−1/2}(1 + Nσ_w²/2)^{−1/2}.
pub fn pulse_area_variance_form<T: Real>(n: u64, sigma_v2: T, sigma_w2: T) -> T {
    let nn = nf::<T>(n);
    ((T::one() + nn * sigma_v2) * (T::one() + nn * sigma_w2 / T::c(2.0))).sqrt().recip()
}

/// Correlated laser phase noise: exp(−N²σ_ϑ²r_corr/2).
pub fn pi0_phase_noise<T: Real>(n: u64, sigma_theta2: T, r_corr: T) -> Result<ParityModel<T>> {
    check_n("pi0_phase_noise", n)?;
    check_var("pi0_phase_noise", "sigma_theta2", sigma_theta2)?;
    if !(r_corr >= T::one() && r_corr <= T::c(5.0)) {
        return Err(domain("pi0_phase_noise", format!("r_corr must lie in [1, 5], got {r_corr}")));
    }
    let x = nf::<T>(n) * nf::<T>(n) * sigma_theta2 * r_corr / T::c(2.0);
    Ok(ParityModel::new(n, (-x).exp(), T::one() - x))
}

/// Momentum spread: (1 − η)^N.
pub fn pi0_momentum_spread<T: Real>(n: u64, eta: T) -> Result<ParityModel<T>> {
    check_n("pi0_momentum_spread", n)?;
    check_prob("pi0_momentum_spread", "eta", eta, false)?;
    Ok(per_atom_power(n, eta, T::one()))
}

/// (1 − q)^{N·k}, small-error 1 − Nkq.
fn per_atom_power<T: Real>(n: u64, q: T, k: T) -> ParityModel<T> {
    let nn = nf::<T>(n) * k;
    ParityModel::new(n, (nn * (-q).ln_1p()).exp(), T::one() - nn * q)
}

/// Detection error: (1 − q_det)^N.
pub fn pi0_measurement<T: Real>(n: u64, q_det: T) -> Result<ParityModel<T>> {
    check_n("pi0_measurement", n)?;
    check_prob("pi0_measurement", "q_det", q_det, false)?;
    Ok(per_atom_power(n, q_det, T::one()))
}

/// Spontaneous-emission probability per atom per sequence, (3π/4)γᵢ/Δ.
pub fn q_spontaneous<T: Real>(delta_raman: T, atom: &AtomSpecies<T>) -> Result<T> {
    if !(delta_raman > T::zero()) {
        return Err(domain("pi0_spontaneous", format!("delta_raman must be > 0, got {delta_raman}")));
    }
    Ok(T::c(0.75) * T::PI() * atom.gamma_i / delta_raman)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpontaneousModel<T> {
    pub model: ParityModel<T>,
    pub q_se: T,
}

/// Spontaneous emission at one-photon detuning Δ (rad/s): (1 − q_SE)^N.
pub fn pi0_spontaneous<T: Real>(n: u64, delta_raman: T, atom: &AtomSpecies<T>) -> Result<SpontaneousModel<T>> {
    check_n("pi0_spontaneous", n)?;
    let q_se = q_spontaneous(delta_raman, atom)?;
    check_prob("pi0_spontaneous", "q_SE", q_se, false)?;
    Ok(SpontaneousModel { model: per_atom_power(n, q_se, T::one()), q_se })
}

/// Post-selected atom loss: (1 − q_loss)^{N/2}.
pub fn pi0_atom_loss<T: Real>(n: u64, q_loss: T) -> Result<ParityModel<T>> {
    check_n("pi0_atom_loss", n)?;
    check_prob("pi0_atom_loss", "q_loss", q_loss, false)?;
    Ok(per_atom_power(n, q_loss, T::c(0.5)))
}

/// Δφ after M shots of which only lossless ones are kept: [√(M(1−q)^N)·N]^{−1}.
pub fn shots_adjusted_uncertainty<T: Real>(m_shots: u64, n: u64, q_loss: T) -> Result<T> {
    if m_shots == 0 {
        return Err(domain("shots_adjusted_uncertainty", "M must be >= 1"));
    }
    check_n("shots_adjusted_uncertainty", n)?;
    check_prob("shots_adjusted_uncertainty", "q_loss", q_loss, false)?;
    let kept = nf::<T>(m_shots) * (nf::<T>(n) * (-q_loss).ln_1p()).exp();
    Ok((kept.sqrt() * nf::<T>(n)).recip())
}

/// Product of exact amplitudes; the small-error form sums the individual errors.
pub fn pi0_total<T: Real>(models: &[ParityModel<T>]) -> Result<ParityModel<T>> {
    let first = models.first().ok_or_else(|| Error::Contract("pi0_total needs at least one model".into()))?;
    if let Some(bad) = models.iter().find(|m| m.n != first.n) {
        return Err(Error::Contract(format!("pi0_total mixes N = {} and N = {}", first.n, bad.n)));
    }
    let exact = models.iter().fold(T::one(), |acc, m| acc * m.pi0_exact);
    let sum_err = models.iter().fold(T::zero(), |acc, m| acc + (T::one() - m.pi0_exact));
    Ok(ParityModel::new(first.n, exact, T::one() - sum_err))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseUncertainty<T> {
    /// rad; +∞ when divergent.
    pub value: T,
    /// Set at a bright fringe with Π₀ < 1, where the slope vanishes.
    pub divergent: bool,
}

/// Δφ for parity Π₀cos(Nφ): the general form at `phi`, or the dark-fringe 1/(Π₀N).
pub fn phase_uncertainty<T: Real>(pi0: T, n: u64, phi: Option<T>) -> Result<PhaseUncertainty<T>> {
    if !(pi0 > T::zero() && pi0 <= T::one()) {
        return Err(domain("phase_uncertainty", format!("pi0 must lie in (0, 1], got {pi0}")));
    }
    check_n("phase_uncertainty", n)?;
    let dark = (pi0 * nf::<T>(n)).recip();
    let Some(phi) = phi else {
        return Ok(PhaseUncertainty { value: dark, divergent: false });
    };
    let (s, c) = (nf::<T>(n) * phi).sin_cos();
    let deficit = T::one() - pi0 * pi0;
    if s.abs() <= T::epsilon() * c.abs() {
        if deficit == T::zero() {
            return Ok(PhaseUncertainty { value: dark, divergent: false });
        }
        return Ok(PhaseUncertainty { value: T::infinity(), divergent: true });
    }
    let value = (s * s + deficit * c * c).sqrt() / s.abs() * dark;
    Ok(PhaseUncertainty { value, divergent: false })
}

/// Independent-atom Δφ = √(1 − cos^{2N}φ)/(N|cos^{N−1}φ sinφ|); φ = nπ gives the limit N^{−1/2}.
pub fn independent_phase_uncertainty<T: Real>(n: u64, phi: T) -> Result<T> {
    check_n("independent_phase_uncertainty", n)?;
    let (s, c) = phi.sin_cos();
    let nn = nf::<T>(n);
    if s.abs() < T::c(1e-7) {
        return Ok(nn.sqrt().recip());
    }
    let cn1 = c.abs().powf(nn - T::one());
    let num = (T::one() - (c * c).powf(nn)).max(T::zero()).sqrt();
    Ok(num / (nn * cn1 * s.abs()))
}

/// Largest N with (1 − η)^N ≥ 0.9.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NStar {
    Bounded(u64),
    Unbounded,
}

impl NStar {
    pub fn value(&self) -> Option<u64> {
        match self {
            NStar::Bounded(n) => Some(*n),
            NStar::Unbounded => None,
        }
    }
}

pub fn n_star<T: Real>(eta: T) -> Result<NStar> {
    if eta == T::zero() {
        return Ok(NStar::Unbounded);
    }
    if !(eta > T::zero() && eta < T::one()) {
        return Err(domain("n_star", format!("eta must lie in [0, 1), got {eta}")));
    }
    let e = eta.f64();
    let l = (-e).ln_1p();
    let target = 0.9f64.ln();
    // ties count as qualifying; allow for rounding in the logarithms
    let ok = |n: u64| n as f64 * l >= target * (1.0 + 1e-12);
    let mut n = (target / l).floor().max(0.0) as u64;
    while ok(n + 1) {
        n += 1;
    }
    while n > 0 && !ok(n) {
        n -= 1;
    }
    Ok(NStar::Bounded(n))
}

/// Ideal fringes: cos^Nφ for independent atoms, cos(Nφ) for a GHZ input.
pub fn ideal_parity_curve<T: Real>(n: u64, phis: &[T], entangled: bool) -> Result<Vec<T>> {
    check_n("ideal_parity_curve", n)?;
    let nn = nf::<T>(n);
    Ok(phis.iter().map(|&p| if entangled { (nn * p).cos() } else { p.cos().powi(n as i32) }).collect())
}

/// Every parameter of the composite error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget<T> {
    pub q_zeta: T,
    /// rad²
    pub sigma_beta2: T,
    pub xi: T,
    /// rad²
    pub sigma_theta2: T,
    pub r_corr: T,
    pub eta: T,
    pub q_det: T,
    /// One-photon detuning Δ, rad/s; infinite disables spontaneous emission.
    pub delta_raman: T,
    pub q_loss: T,
}

impl<T: Real> Default for ErrorBudget<T> {
    fn default() -> Self {
        Self {
            q_zeta: T::zero(),
            sigma_beta2: T::zero(),
            xi: T::zero(),
            sigma_theta2: T::zero(),
            r_corr: T::c(5.0),
            eta: T::zero(),
            q_det: T::zero(),
            delta_raman: T::infinity(),
            q_loss: T::zero(),
        }
    }
}

impl<T: Real> ErrorBudget<T> {
    pub fn validate(&self) -> Result<()> {
        let w = "ErrorBudget";
        check_prob(w, "q_zeta", self.q_zeta, true)?;
        check_var(w, "sigma_beta2", self.sigma_beta2)?;
        check_var(w, "xi", self.xi)?;
        check_var(w, "sigma_theta2", self.sigma_theta2)?;
        if !(self.r_corr >= T::one() && self.r_corr <= T::c(5.0)) {
            return Err(domain(w, format!("r_corr must lie in [1, 5], got {}", self.r_corr)));
        }
        check_prob(w, "eta", self.eta, false)?;
        check_prob(w, "q_det", self.q_det, false)?;
        if !(self.delta_raman > T::zero()) {
            return Err(domain(w, format!("delta_raman must be > 0, got {}", self.delta_raman)));
        }
        check_prob(w, "q_loss", self.q_loss, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorSource {
    StatePrep,
    PulseArea,
    LaserPhase,
    MomentumSpread,
    Measurement,
    SpontaneousEmission,
    AtomLoss,
}

impl ErrorSource {
    pub const ALL: [ErrorSource; 7] = [
        ErrorSource::StatePrep,
        ErrorSource::PulseArea,
        ErrorSource::LaserPhase,
        ErrorSource::MomentumSpread,
        ErrorSource::Measurement,
        ErrorSource::SpontaneousEmission,
        ErrorSource::AtomLoss,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            ErrorSource::StatePrep => "state_prep",
            ErrorSource::PulseArea => "pulse_area",
            ErrorSource::LaserPhase => "laser_phase",
            ErrorSource::MomentumSpread => "momentum_spread",
            ErrorSource::Measurement => "measurement",
            ErrorSource::SpontaneousEmission => "spontaneous_emission",
            ErrorSource::AtomLoss => "atom_loss",
        }
    }

    pub fn exact_formula(&self) -> &'static str {
        match self {
            ErrorSource::StatePrep => "(1-q_zeta)*exp(-sigma_beta^2/2)",
            ErrorSource::PulseArea => "binomial sums; large N: (1+N*xi^2*pi/2)^-1",
            ErrorSource::LaserPhase => "exp(-N^2*sigma_theta^2*r_corr/2)",
            ErrorSource::MomentumSpread => "(1-eta)^N",
            ErrorSource::Measurement => "(1-q_det)^N",
            ErrorSource::SpontaneousEmission => "(1-q_SE)^N",
            ErrorSource::AtomLoss => "(1-q_loss)^(N/2)",
        }
    }

    pub fn small_error_formula(&self) -> &'static str {
        match self {
            ErrorSource::StatePrep => "1-(q_zeta+sigma_beta^2/2)",
            ErrorSource::PulseArea => "1-N*xi^2*pi/2",
            ErrorSource::LaserPhase => "1-N^2*sigma_theta^2*r_corr/2",
            ErrorSource::MomentumSpread => "1-N*eta",
            ErrorSource::Measurement => "1-N*q_det",
            ErrorSource::SpontaneousEmission => "1-N*q_SE",
            ErrorSource::AtomLoss => "1-N*q_loss/2",
        }
    }
}

/// Π₀ of every source in the budget at atom number `n`.
pub fn budget_models<T: Real>(
    budget: &ErrorBudget<T>,
    n: u64,
    atom: &AtomSpecies<T>,
) -> Result<Vec<(ErrorSource, ParityModel<T>)>> {
    budget.validate()?;
    let (sv2, sw2) = pulse_area_variances(budget.xi);
    let se = if budget.delta_raman.is_infinite() {
        ParityModel::new(n, T::one(), T::one())
    } else {
        pi0_spontaneous(n, budget.delta_raman, atom)?.model
    };
    Ok(vec![
        (ErrorSource::StatePrep, pi0_state_prep(n, budget.q_zeta, budget.sigma_beta2)?),
        (ErrorSource::PulseArea, pi0_pulse_area_exact(n, sv2, sw2)?),
        (ErrorSource::LaserPhase, pi0_phase_noise(n, budget.sigma_theta2, budget.r_corr)?),
        (ErrorSource::MomentumSpread, pi0_momentum_spread(n, budget.eta)?),
        (ErrorSource::Measurement, pi0_measurement(n, budget.q_det)?),
        (ErrorSource::SpontaneousEmission, se),
        (ErrorSource::AtomLoss, pi0_atom_loss(n, budget.q_loss)?),
    ])
}
