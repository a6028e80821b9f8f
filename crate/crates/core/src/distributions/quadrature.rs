use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::distributions::thermal::ThermalMomentum;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureScheme {
    GaussHermite,
    AdaptiveSimpson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: QuadratureScheme,
    pub node_count: usize,
    /// Half-width of the adaptive domain in units of σ.
    pub truncation: f64,
    /// Relative convergence target.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { scheme: QuadratureScheme::GaussHermite, node_count: 201, truncation: 10.0, rel_tol: 1e-10 }
    }
}

impl QuadratureSpec {
    pub fn gauss_hermite(node_count: usize) -> Self {
        Self { node_count, ..Self::default() }
    }

    pub fn adaptive(truncation: f64) -> Self {
        Self { scheme: QuadratureScheme::AdaptiveSimpson, truncation, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(domain("QuadratureSpec", format!("node_count must be >= 16, got {}", self.node_count)));
        }
        if self.scheme == QuadratureScheme::AdaptiveSimpson && !(self.truncation >= 8.0) {
            return Err(domain("QuadratureSpec", format!("truncation must be >= 8 sigma, got {}", self.truncation)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(domain("QuadratureSpec", "rel_tol must be > 0"));
        }
        Ok(())
    }
}

/// Gauss–Hermite rule for the standard normal weight: Σ wᵢ f(xᵢ) ≈ E[f(Z)].
#[derive(Debug)]
pub struct GaussHermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermiteRule {
    fn compute(n: usize) -> Self {
        // roots of the orthonormal Hermite polynomial (weight e^{−x²}) bracketed on a grid
        // finer than the minimum root spacing, then polished by safeguarded Newton
        let nf = n as f64;
        let xmax = (2.0 * nf + 1.0).sqrt() + 1.0;
        let step = 0.5 / (2.0 * nf + 1.0).sqrt();
        let mut pos = Vec::with_capacity(n / 2 + 1);
        let mut a = if n % 2 == 1 { step / 2.0 } else { 0.0 };
        if n % 2 == 1 {
            pos.push(0.0);
        }
        let mut fa = hermite(n, a).0;
        while a < xmax && pos.len() < n.div_ceil(2) {
            let b = a + step;
            let fb = hermite(n, b).0;
            if fa == 0.0 || fa.signum() != fb.signum() {
                pos.push(polish(n, a, b));
            }
            a = b;
            fa = fb;
        }
        assert_eq!(pos.len(), n.div_ceil(2), "Gauss-Hermite root bracketing failed for n = {n}");
        let ln_norm = 2f64.ln() - 0.5 * std::f64::consts::PI.ln();
        let half: Vec<(f64, f64)> = pos
            .iter()
            .map(|&z| {
                let (_, dp, log_scale) = hermite(n, z);
                (z * std::f64::consts::SQRT_2, (ln_norm - 2.0 * (dp.abs().ln() + log_scale)).exp())
            })
            .collect();
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &(x, w) in half.iter().rev().filter(|(x, _)| *x > 0.0) {
            nodes.push(-x);
            weights.push(w);
        }
        for &(x, w) in &half {
            nodes.push(x);
            weights.push(w);
        }
        Self { nodes, weights }
    }

    pub fn expect<T: Real>(&self, f: impl Fn(T) -> T) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| T::c(w) * f(T::c(x))).sum()
    }
}

/// Shared rule cache; rules are computed once per node count.
pub fn gauss_hermite_rule(n: usize) -> Arc<GaussHermiteRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermiteRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("rule cache poisoned").get(&n) {
        return r.clone();
    }
    let rule = Arc::new(GaussHermiteRule::compute(n));
    cache.lock().expect("rule cache poisoned").entry(n).or_insert(rule).clone()
}

/// Orthonormal Hermite value and derivative at `z` as (p, p′, ln scale); p and p′ are
/// divided by e^{scale} to stay finite at large degree.
fn hermite(n: usize, z: f64) -> (f64, f64, f64) {
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let mut p1 = PIM4;
    let mut p2 = 0.0;
    let mut log_scale = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
        if p1.abs() > 1e150 {
            p1 *= 1e-150;
            p2 *= 1e-150;
            log_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    (p1, (2.0 * n as f64).sqrt() * p2, log_scale)
}

fn polish(n: usize, mut a: f64, mut b: f64) -> f64 {
    let fa = hermite(n, a).0;
    let mut z = 0.5 * (a + b);
    for _ in 0..200 {
        let (p, dp, _) = hermite(n, z);
        if p == 0.0 {
            return z;
        }
        if p.signum() == fa.signum() {
            a = z;
        } else {
            b = z;
        }
        let newton = z - p / dp;
        let next = if newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - z).abs() <= 1e-16 * z.abs().max(1.0) {
            return next;
        }
        z = next;
    }
    z
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation<T> {
    pub value: T,
    pub error_estimate: T,
}

fn tolerance<T: Real>(value: T, spec: &QuadratureSpec) -> T {
    (T::c(spec.rel_tol) * value.abs()).max(T::tol_floor())
}

/// E[f(X)] for X ~ N(0, σ²).
pub fn expect_gaussian<T: Real>(f: impl Fn(T) -> T, sigma: T, spec: &QuadratureSpec) -> Result<Expectation<T>> {
    spec.validate()?;
    if !(sigma > T::zero()) {
        return Err(domain("expect_gaussian", format!("sigma must be > 0, got {sigma}")));
    }
    if spec.scheme == QuadratureScheme::GaussHermite {
        let fine = gauss_hermite_rule(spec.node_count).expect(|x: T| f(sigma * x));
        let coarse = gauss_hermite_rule((spec.node_count / 2).max(16)).expect(|x: T| f(sigma * x));
        let est = (fine - coarse).abs();
        if est <= tolerance(fine, spec) {
            return Ok(Expectation { value: fine, error_estimate: est });
        }
        log::debug!("Gauss-Hermite estimate {est} above tolerance; falling back to adaptive Simpson");
    }
    adaptive_gaussian(&f, sigma, spec)
}

fn adaptive_gaussian<T: Real>(f: &impl Fn(T) -> T, sigma: T, spec: &QuadratureSpec) -> Result<Expectation<T>> {
    let trunc = spec.truncation.max(8.0);
    let norm = T::TAU().sqrt().recip();
    let g = |u: T| norm * (-(u * u) / T::c(2.0)).exp() * f(sigma * u);
    const PANELS: usize = 64;
    const MAX_DEPTH: u32 = 40;
    let budget = std::cell::Cell::new(MAX_EVALUATIONS);
    let lo = T::c(-trunc);
    let h = T::c(2.0 * trunc / PANELS as f64);
    let mut total = T::zero();
    let mut err = T::zero();
    // absolute target: relative to the unit-mass scale of a bounded integrand
    let target = T::c(spec.rel_tol).max(T::tol_floor());
    for k in 0..PANELS {
        let a = lo + h * T::c(k as f64);
        let b = a + h;
        let (fa, fm, fb) = (g(a), g((a + b) / T::c(2.0)), g(b));
        let whole = simpson_panel(a, b, fa, fm, fb);
        let (v, e) = refine(&g, a, b, fa, fm, fb, whole, target / T::c(PANELS as f64), MAX_DEPTH, &budget);
        total = total + v;
        err = err + e;
    }
    if err <= tolerance(total, spec).max(target) {
        Ok(Expectation { value: total, error_estimate: err })
    } else {
        Err(Error::Quadrature { estimate: total.f64(), error_bound: err.f64() })
    }
}

/// Integrand evaluations allowed per adaptive integral.
const MAX_EVALUATIONS: usize = 2_000_000;

#[inline]
fn simpson_panel<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::c(6.0) * (fa + T::c(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Real>(
    g: &impl Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
    budget: &std::cell::Cell<usize>,
) -> (T, T) {
    let m = (a + b) / T::c(2.0);
    let lm = (a + m) / T::c(2.0);
    let rm = (m + b) / T::c(2.0);
    let (flm, frm) = (g(lm), g(rm));
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let left_budget = budget.get().saturating_sub(2);
    budget.set(left_budget);
    if depth == 0 || left_budget == 0 || delta.abs() <= T::c(15.0) * tol {
        return (left + right + delta / T::c(15.0), delta.abs() / T::c(15.0));
    }
    let half = tol / T::c(2.0);
    let (lv, le) = refine(g, a, m, fa, flm, fm, left, half, depth - 1, budget);
    let (rv, re) = refine(g, m, b, fm, frm, fb, right, half, depth - 1, budget);
    (lv + rv, le + re)
}

/// ∫ P(p) f(p) dp over the thermal momentum distribution.
pub fn expect_over_momentum<T: Real>(
    f: impl Fn(T) -> T,
    d: &ThermalMomentum<T>,
    q: &QuadratureSpec,
) -> Result<Expectation<T>> {
    expect_gaussian(f, d.sigma_th, q)
}
