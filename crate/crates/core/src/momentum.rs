//! Parity loss η from the thermal momentum spread, its chirp-mismatch correction,
//! and the consistency bounds that justify the model.

use crate::constants::AtomSpecies;
use crate::distributions::quadrature::{expect_gaussian, QuadratureSpec};
use crate::distributions::thermal::{thermal_sigma, vib_energy, TrapConfig};
use crate::error::{domain, Result};
use crate::scalar::Real;

/// κ = (π² + 3 − 2π)/2.
pub fn kappa<T: Real>() -> T {
    let pi = T::PI();
    (pi * pi + T::c(3.0) - T::c(2.0) * pi) / T::c(2.0)
}

/// Below this |r| the deficit uses its quadratic series.
const SERIES_R: f64 = 1e-6;
/// Upper edge of the small-spread regime, Kσ_th/(mΩ).
const REGIME_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanConfig<T> {
    /// Ω_eff, rad/s.
    pub omega_eff: T,
    /// Interrogation half-time T, s.
    pub free_time: T,
    /// m/s²
    pub acceleration: T,
    /// Chirp mismatch ε in b = (1 + ε)Ka.
    pub epsilon: T,
    /// δ^AC, rad/s.
    pub stark_shift: T,
}

impl<T: Real> RamanConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_eff > T::zero()) {
            return Err(domain("RamanConfig", format!("omega_eff must be > 0, got {}", self.omega_eff)));
        }
        if !(self.free_time > T::zero()) {
            return Err(domain("RamanConfig", format!("free_time must be > 0, got {}", self.free_time)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaResult<T> {
    pub eta_num: T,
    pub eta_approx: T,
    /// |η_approx − η_num|/η_num
    pub relative_error: T,
    pub quadrature_error_estimate: T,
    /// Kσ_th/(mΩ) < 0.5.
    pub in_regime: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpCorrection<T> {
    pub eta_tot: T,
    /// Fringe shift, rad.
    pub theta: T,
    /// η_tot − η
    pub eta_eps: T,
    pub b_r: T,
    pub b_i: T,
    /// False when εKaT exceeds 0.1·Kσ_th/m and the expansion around r is suspect.
    pub chirp_regime_ok: bool,
}

/// Rms spread of r = −pK/(mΩ).
pub fn r_spread<T: Real>(trap: &TrapConfig<T>, atom: &AtomSpecies<T>, omega_eff: T) -> Result<T> {
    let s = thermal_sigma(trap, atom)?.sigma_th;
    Ok(s * atom.wave_number / atom.mass / omega_eff)
}

/// λ = (π/4)√(1 + r²) with its sine and cosine.
#[inline]
fn lambda<T: Real>(r: T) -> (T, T, T) {
    let q = T::one() + r * r;
    let (s, c) = (T::FRAC_PI_4() * q.sqrt()).sin_cos();
    (q, s, c)
}

/// 1 − ⟨…⟩ integrand of η at a single r, written without tanλ so it stays finite at λ = π/2.
pub fn eta_deficit<T: Real>(r: T) -> T {
    if r.abs() < T::c(SERIES_R) {
        return kappa::<T>() * r * r;
    }
    let (q, sl, cl) = lambda(r);
    let s2 = T::c(2.0) * sl * cl;
    let (spr, cpr) = (T::PI() * r).sin_cos();
    let first = s2 * s2 * s2 * cpr / (q * q.sqrt());
    let second = r * T::c(8.0) * sl.powi(4) * cl * cl * spr / (q * q);
    T::one() - (first + second)
}

/// Real and imaginary integrands of B at (r₁, r₂) as (1 − B_R term, B_I term).
fn chirp_terms<T: Real>(r1: T, r2: T) -> (T, T) {
    if r1 == r2 {
        // B_I is odd in r and integrates to zero; the real part is the η integrand
        return (eta_deficit(r1), T::zero());
    }
    let (q1, s1, c1) = lambda(r1);
    let (q2, s2, c2) = lambda(r2);
    let sin2l1 = T::c(2.0) * s1 * c1;
    let sin2l2 = T::c(2.0) * s2 * c2;
    let a = sin2l1 * sin2l1 / q1;
    let s = a * sin2l2 / q2.sqrt();
    // S·r₂tanλ₂/√(1+r₂²), with sin2λ·tanλ = 2sin²λ
    let sc = a * T::c(2.0) * s2 * s2 * r2 / q2;
    let (sp, cp) = (T::PI() * r1).sin_cos();
    (T::one() - (s * cp + sc * sp), s * sp - sc * cp)
}

/// κK²⟨E_vib⟩/(mΩ²).
pub fn eta_approx<T: Real>(trap: &TrapConfig<T>, atom: &AtomSpecies<T>, omega_eff: T) -> Result<T> {
    if !(omega_eff > T::zero()) {
        return Err(domain("eta_approx", format!("omega_eff must be > 0, got {omega_eff}")));
    }
    let e = vib_energy(trap)?;
    let k = atom.wave_number;
    // (K/Ω)² first keeps f32 in range
    let ko = k / omega_eff;
    Ok(kappa::<T>() * ko * ko * e / atom.mass)
}

/// η by quadrature over the thermal momentum distribution.
pub fn eta_numeric<T: Real>(
    trap: &TrapConfig<T>,
    atom: &AtomSpecies<T>,
    omega_eff: T,
    q: &QuadratureSpec,
) -> Result<EtaResult<T>> {
    if !(omega_eff > T::zero()) {
        return Err(domain("eta_numeric", format!("omega_eff must be > 0, got {omega_eff}")));
    }
    let s = r_spread(trap, atom, omega_eff)?;
    let in_regime = s < T::c(REGIME_LIMIT);
    if !in_regime {
        log::warn!("Kσ_th/(mΩ) = {s} is outside the small-spread regime");
    }
    let ex = expect_gaussian(|u: T| eta_deficit(s * u), T::one(), q)?;
    let approx = eta_approx(trap, atom, omega_eff)?;
    let eta = ex.value;
    let relative_error = if eta > T::zero() { ((approx - eta) / eta).abs() } else { T::zero() };
    Ok(EtaResult { eta_num: eta, eta_approx: approx, relative_error, quadrature_error_estimate: ex.error_estimate, in_regime })
}

/// η_tot and fringe shift θ under chirp mismatch ε.
pub fn eta_tot_theta<T: Real>(
    trap: &TrapConfig<T>,
    atom: &AtomSpecies<T>,
    cfg: &RamanConfig<T>,
    q: &QuadratureSpec,
) -> Result<ChirpCorrection<T>> {
    cfg.validate()?;
    let s = r_spread(trap, atom, cfg.omega_eff)?;
    let d = chirp_offset(atom, cfg);
    if d.abs() >= T::c(REGIME_LIMIT) {
        log::warn!("εKaT/Ω = {d} is outside the small-mismatch regime");
    }
    let eta = eta_numeric(trap, atom, cfg.omega_eff, q)?.eta_num;
    let deficit = expect_gaussian(|u: T| chirp_terms(s * u + d, s * u + d + d).0, T::one(), q)?.value;
    let b_i = if d == T::zero() {
        T::zero()
    } else {
        expect_gaussian(|u: T| chirp_terms(s * u + d, s * u + d + d).1, T::one(), q)?.value
    };
    let b_r = T::one() - deficit;
    // 1 − |B| written so B_I = 0 returns the deficit bit for bit
    let mag = b_r.hypot(b_i);
    let eta_tot = deficit - b_i * b_i / (mag + b_r);
    let theta = b_i.atan2(b_r);
    let spread = thermal_sigma(trap, atom)?.sigma_th * atom.wave_number / atom.mass;
    let drift = (cfg.epsilon * atom.wave_number * cfg.acceleration * cfg.free_time).abs();
    Ok(ChirpCorrection {
        eta_tot,
        theta,
        eta_eps: eta_tot - eta,
        b_r,
        b_i,
        chirp_regime_ok: drift <= T::c(0.1) * spread,
    })
}

/// εKaT/Ω, the shift of r between consecutive pulses.
fn chirp_offset<T: Real>(atom: &AtomSpecies<T>, cfg: &RamanConfig<T>) -> T {
    cfg.epsilon * atom.wave_number * cfg.acceleration * cfg.free_time / cfg.omega_eff
}

/// Leading-order η_tot ≈ κ(Kσ_th/mΩ)² + (εKaT/Ω)² and θ ≈ (π − 2)εKaT/Ω.
pub fn eta_tot_theta_approx<T: Real>(
    trap: &TrapConfig<T>,
    atom: &AtomSpecies<T>,
    cfg: &RamanConfig<T>,
) -> Result<ChirpCorrection<T>> {
    cfg.validate()?;
    let s = r_spread(trap, atom, cfg.omega_eff)?;
    let d = chirp_offset(atom, cfg);
    let eta_eps = d * d;
    let eta_tot = kappa::<T>() * s * s + eta_eps;
    let theta = (T::PI() - T::c(2.0)) * d;
    let mag = T::one() - eta_tot;
    let spread = s * cfg.omega_eff;
    let drift = (d * cfg.omega_eff).abs();
    Ok(ChirpCorrection {
        eta_tot,
        theta,
        eta_eps,
        b_r: mag * theta.cos(),
        b_i: mag * theta.sin(),
        chirp_regime_ok: drift <= T::c(0.1) * spread,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcStarkRatio<T> {
    /// ξ²/η
    pub leading: T,
    /// ξ²/(A⟨r²⟩) with ⟨r²⟩ = η/κ
    pub refined: T,
}

/// Bound on (Δδ^AC)²/(Δδ′)²_th from intensity noise ξ at pulse area A.
pub fn ac_stark_ratio_bound<T: Real>(xi: T, area: T, eta: T) -> Result<AcStarkRatio<T>> {
    if !(eta > T::zero()) {
        return Err(domain("ac_stark_ratio_bound", format!("eta must be > 0, got {eta}")));
    }
    if !(area > T::zero()) {
        return Err(domain("ac_stark_ratio_bound", format!("area must be > 0, got {area}")));
    }
    let x2 = xi * xi;
    Ok(AcStarkRatio { leading: x2 / eta, refined: kappa::<T>() * x2 / (area * eta) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastOscillation<T> {
    /// γ = (KTΔp/m)²
    pub gamma: T,
    /// γ ≥ 100, so e^{−γ} cross terms are negligible.
    pub valid: bool,
}

pub fn fast_oscillation_exponent<T: Real>(atom: &AtomSpecies<T>, free_time: T, dp: T) -> Result<FastOscillation<T>> {
    if !(free_time > T::zero()) {
        return Err(domain("fast_oscillation_exponent", format!("T must be > 0, got {free_time}")));
    }
    if !(dp >= T::zero()) {
        return Err(domain("fast_oscillation_exponent", format!("dp must be >= 0, got {dp}")));
    }
    let x = atom.wave_number * free_time * dp / atom.mass;
    let gamma = x * x;
    Ok(FastOscillation { gamma, valid: gamma >= T::c(100.0) })
}

/// Minimum-uncertainty momentum spread (Δp)₀ = σ_p/√2.
pub fn ground_state_momentum_spread<T: Real>(trap: &TrapConfig<T>, atom: &AtomSpecies<T>) -> T {
    trap.sigma_p(atom) / T::SQRT_2()
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope<T: Real>(xs: &[T], ys: &[T]) -> Result<T> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(domain("loglog_slope", "need at least two paired points"));
    }
    let lx: Vec<T> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<T> = ys.iter().map(|y| y.ln()).collect();
    let n = T::c(xs.len() as f64);
    let mx = lx.iter().copied().sum::<T>() / n;
    let my = ly.iter().copied().sum::<T>() / n;
    let sxy: T = lx.iter().zip(&ly).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: T = lx.iter().map(|&x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn cs() -> AtomSpecies<f64> {
        AtomSpecies::cs133()
    }

    fn trap(nu: f64, t: f64) -> TrapConfig<f64> {
        TrapConfig::new(nu, t).unwrap()
    }

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    /// Bracket exactly as written with tanλ, valid away from λ = π/2.
    fn naive_bracket(r: f64) -> f64 {
        let l = PI / 4.0 * (1.0 + r * r).sqrt();
        let q = 1.0 + r * r;
        (2.0 * l).sin().powi(3) / q.powf(1.5) * ((PI * r).cos() + r * l.tan() * (PI * r).sin() / q.sqrt())
    }

    #[test]
    fn kappa_value() {
        assert!((kappa::<f64>() - 3.2932).abs() < 1e-4);
    }

    #[test]
    fn deficit_matches_naive_form() {
        for r in [-1.2, -0.5, -1e-3, 2e-6, 0.1, 0.7, 1.5] {
            assert!((eta_deficit(r) - (1.0 - naive_bracket(r))).abs() < 1e-13, "r={r}");
        }
        let r = 1e-6 * 0.9;
        assert!((eta_deficit(r) - (1.0 - naive_bracket(r))).abs() < 1e-15);
        assert!(eta_deficit(3f64.sqrt()).is_finite());
    }

    #[test]
    fn chirp_terms_reduce_to_eta_at_equal_r() {
        // the general branch with r₁ = r₂ must agree with the η integrand
        let r: f64 = 0.23;
        let (q1, s1, c1) = lambda(r);
        let sin2 = 2.0 * s1 * c1;
        let s = sin2 * sin2 / q1 * sin2 / q1.sqrt();
        let sc = sin2 * sin2 / q1 * 2.0 * s1 * s1 * r / q1;
        let br = s * (PI * r).cos() + sc * (PI * r).sin();
        assert!((1.0 - br - eta_deficit(r)).abs() < 1e-15);
        let nudged = chirp_terms(r, r * (1.0 + 1e-15));
        assert!((nudged.0 - eta_deficit(r)).abs() < 1e-13);
    }

    #[test]
    fn eta_vanishes_for_tight_cold_trap() {
        let e = eta_numeric(&trap(1.0, 0.0), &cs(), TAU * 10e6, &q()).unwrap();
        assert!(e.eta_num < 1e-9 && e.eta_num > 0.0);
    }

    #[test]
    fn table_rows() {
        let rows = [(400e3, 14.5e3, 0.65e-6, 5.0e-3), (450e3, 10e3, 0.3e-6, 2.0e-3), (600e3, 5.9e3, 0.1e-6, 5.0e-4)];
        for (om, nu, t, want) in rows {
            let e = eta_numeric(&trap(nu, t), &cs(), TAU * om, &q()).unwrap();
            assert!((e.eta_num / want - 1.0).abs() < 0.05, "{om}: {}", e.eta_num);
            assert!(e.quadrature_error_estimate < 1e-8 * e.eta_num.max(1e-6));
            assert!(e.relative_error < 3.0 * e.eta_num && e.relative_error > e.eta_num / 3.0);
            assert!(e.in_regime);
        }
        let blue = eta_approx(&trap(5.9e3, 0.1e-6), &cs(), TAU * 600e3).unwrap();
        assert!((blue / 5.02e-4 - 1.0).abs() < 0.01, "{blue}");
    }

    #[test]
    fn node_doubling_is_stable() {
        let t = trap(14.5e3, 0.65e-6);
        let a = eta_numeric(&t, &cs(), TAU * 400e3, &QuadratureSpec::gauss_hermite(201)).unwrap().eta_num;
        let b = eta_numeric(&t, &cs(), TAU * 400e3, &QuadratureSpec::gauss_hermite(402)).unwrap().eta_num;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn sign_of_k_is_irrelevant() {
        let mut flipped = cs();
        flipped.wave_number = -flipped.wave_number;
        let t = trap(10e3, 0.3e-6);
        let a = eta_numeric(&t, &cs(), TAU * 450e3, &q()).unwrap().eta_num;
        let b = eta_numeric(&t, &flipped, TAU * 450e3, &q()).unwrap().eta_num;
        assert!((a - b).abs() < 1e-12);
    }

    fn raman(om: f64, eps: f64) -> RamanConfig<f64> {
        RamanConfig { omega_eff: TAU * om, free_time: 1e-3, acceleration: 9.8, epsilon: eps, stark_shift: 0.0 }
    }

    #[test]
    fn zero_mismatch_reproduces_eta() {
        let t = trap(10e3, 0.1e-6);
        let c = eta_tot_theta(&t, &cs(), &raman(300e3, 0.0), &q()).unwrap();
        let e = eta_numeric(&t, &cs(), TAU * 300e3, &q()).unwrap().eta_num;
        assert_eq!(c.eta_tot, e);
        assert_eq!(c.theta, 0.0);
        let a = eta_tot_theta_approx(&t, &cs(), &raman(300e3, 0.0)).unwrap();
        assert!((a.eta_tot - eta_approx(&t, &cs(), TAU * 300e3).unwrap()).abs() < 1e-18);
    }

    #[test]
    fn mismatch_coefficient() {
        let t = trap(10e3, 0.1e-6);
        for eps in [1e-3, 1e-2] {
            let c = eta_tot_theta(&t, &cs(), &raman(300e3, eps), &q()).unwrap();
            let e = eta_numeric(&t, &cs(), TAU * 300e3, &q()).unwrap().eta_num;
            let coeff = c.eta_eps / e / (eps * eps);
            assert!((coeff / 1.91 - 1.0).abs() < 0.02, "{coeff}");
            assert!((c.eta_tot - (1.0 - c.b_r.hypot(c.b_i))).abs() < 1e-12);
            assert!(c.eta_tot >= e - 1e-9);
        }
    }

    #[test]
    fn fringe_shift_ratio_and_sign() {
        let t = trap(10e3, 0.1e-6);
        let eps = 1e-3;
        let c = eta_tot_theta(&t, &cs(), &raman(100e3, eps), &q()).unwrap();
        let phi = eps * cs().wave_number * 9.8 * 1e-6;
        let want = (PI - 2.0) / (TAU * 100e3 * 1e-3);
        assert!((c.theta / phi / want - 1.0).abs() < 0.05);
        let m = eta_tot_theta(&t, &cs(), &raman(100e3, -eps), &q()).unwrap();
        assert!(c.theta > 0.0 && m.theta < 0.0);
    }

    #[test]
    fn approximate_mismatch_term() {
        let t = trap(5.9e3, 0.1e-6);
        let cfg = raman(600e3, 1e-2);
        let a = eta_tot_theta_approx(&t, &cs(), &cfg).unwrap();
        let n = eta_tot_theta(&t, &cs(), &cfg, &q()).unwrap();
        assert!((n.eta_eps - a.eta_eps).abs() < 0.05 * a.eta_eps);
        assert!(a.theta > 0.0);
    }

    #[test]
    fn ac_stark_examples() {
        let r = ac_stark_ratio_bound(1e-3, PI, 1e-4).unwrap();
        assert!((r.leading - 1e-2).abs() < 1e-15);
        assert!((r.refined / r.leading - kappa::<f64>() / PI).abs() < 1e-12);
        assert_eq!(ac_stark_ratio_bound(0.0, PI, 1e-4).unwrap().leading, 0.0);
        assert!((ac_stark_ratio_bound(1e-3, PI, 5e-4).unwrap().leading - 2e-3).abs() < 1e-15);
        assert!(ac_stark_ratio_bound(1e-3, PI, 0.0).is_err());
    }

    #[test]
    fn fast_oscillation_examples() {
        let dp = ground_state_momentum_spread(&trap(10e3, 0.0), &cs());
        let f = fast_oscillation_exponent(&cs(), 1e-3, dp).unwrap();
        assert!(f.gamma > 300.0 && f.gamma < 3e4 && f.valid, "{}", f.gamma);
        let z = fast_oscillation_exponent(&cs(), 1e-3, 0.0).unwrap();
        assert!(z.gamma == 0.0 && !z.valid);
        let g2 = fast_oscillation_exponent(&cs(), 2e-3, dp).unwrap().gamma;
        assert!((g2 / f.gamma - 4.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_laws() {
        let oms: Vec<f64> = (0..10).map(|i| TAU * 1e5 * 10f64.powf(i as f64 / 9.0)).collect();
        let t = trap(10e3, 0.1e-6);
        let es: Vec<f64> = oms.iter().map(|&o| eta_numeric(&t, &cs(), o, &q()).unwrap().eta_num).collect();
        assert!((loglog_slope(&oms, &es).unwrap() + 2.0).abs() < 0.02);
        let nus: Vec<f64> = (0..8).map(|i| 5e4 * 4f64.powf(i as f64 / 7.0)).collect();
        let es: Vec<f64> = nus.iter().map(|&n| eta_numeric(&trap(n, 0.01e-6), &cs(), TAU * 1e6, &q()).unwrap().eta_num).collect();
        assert!((loglog_slope(&nus, &es).unwrap() - 1.0).abs() < 0.02);
        let nus: Vec<f64> = (0..8).map(|i| 1e3 * 5f64.powf(i as f64 / 7.0)).collect();
        let es: Vec<f64> = nus.iter().map(|&n| eta_numeric(&trap(n, 10e-6), &cs(), TAU * 300e3, &q()).unwrap().eta_num).collect();
        assert!(loglog_slope(&nus, &es).unwrap().abs() < 0.02);
        let (lo, hi) = es.iter().fold((f64::MAX, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
        assert!(hi / lo - 1.0 < 0.01);
    }

    #[test]
    fn f32_eta() {
        let t = TrapConfig::new(10e3f32, 0.3e-6).unwrap();
        let e32 = eta_numeric(&t, &AtomSpecies::<f32>::cs133(), std::f32::consts::TAU * 450e3, &q()).unwrap().eta_num;
        let e64 = eta_numeric(&trap(10e3, 0.3e-6), &cs(), TAU * 450e3, &q()).unwrap().eta_num;
        assert!(((e32 as f64) / e64 - 1.0).abs() < 1e-3);
    }
}
