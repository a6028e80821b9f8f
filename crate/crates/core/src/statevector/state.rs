use num_complex::Complex;

use crate::error::{domain, Error, Result};
use crate::pulse::Unitary2;
use crate::scalar::Real;

/// Largest N stored as a dense 2^N amplitude vector.
pub const DENSE_CAP: usize = 14;

/// Single-atom amplitudes (c_g, c_e).
pub type Qubit<T> = [Complex<T>; 2];

#[derive(Debug, Clone, PartialEq)]
pub enum InitialStateSpec<T> {
    /// (|g…g⟩ + |e…e⟩)/√2
    Ghz,
    /// (|g…g⟩ + e^{iβ}|e…e⟩)/√2
    GhzPhase { beta: T },
    /// c_g|g…g⟩ + c_e|e…e⟩
    Entangled { c_g: Complex<T>, c_e: Complex<T> },
    /// ⊗_k (c_g^(k)|g⟩ + c_e^(k)|e⟩)
    Product { amplitudes: Vec<Qubit<T>> },
    /// Noise state ⊗_k (cos(ϑ_k/2)|g⟩ + e^{iφ_k} sin(ϑ_k/2)|e⟩)
    Noise { theta: Vec<T>, varphi: Vec<T> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    /// Dense up to the cap, structured above it.
    #[default]
    Auto,
    Dense,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState<T> {
    pub n: usize,
    /// Bit k of the index is atom k; 1 means excited.
    pub amplitudes: Vec<Complex<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm<T> {
    pub coeff: Complex<T>,
    pub atoms: Vec<Qubit<T>>,
}

/// Superposition of a few product states; local unitaries keep the term count fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSum<T> {
    pub n: usize,
    pub terms: Vec<ProductTerm<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpinState<T> {
    Dense(DenseState<T>),
    Structured(ProductSum<T>),
}

fn cx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

fn ground<T: Real>() -> Qubit<T> {
    [cx(T::one()), cx(T::zero())]
}

fn excited<T: Real>() -> Qubit<T> {
    [cx(T::zero()), cx(T::one())]
}

impl<T: Real> InitialStateSpec<T> {
    /// The state as a sum of product terms.
    pub fn product_sum(&self, n: usize) -> Result<ProductSum<T>> {
        if n == 0 {
            return Err(domain("build_initial", "N must be >= 1"));
        }
        let h = cx(T::FRAC_1_SQRT_2());
        let pair = |c_g: Complex<T>, c_e: Complex<T>| ProductSum {
            n,
            terms: vec![
                ProductTerm { coeff: c_g, atoms: vec![ground(); n] },
                ProductTerm { coeff: c_e, atoms: vec![excited(); n] },
            ],
        };
        let tol = T::c(1e-10).max(T::tol_floor());
        Ok(match self {
            InitialStateSpec::Ghz => pair(h, h),
            InitialStateSpec::GhzPhase { beta } => pair(h, Complex::from_polar(T::FRAC_1_SQRT_2(), *beta)),
            InitialStateSpec::Entangled { c_g, c_e } => {
                if (c_g.norm_sqr() + c_e.norm_sqr() - T::one()).abs() > tol {
                    return Err(domain("build_initial", "entangled coefficients must satisfy |c_g|² + |c_e|² = 1"));
                }
                pair(*c_g, *c_e)
            }
            InitialStateSpec::Product { amplitudes } => {
                if amplitudes.len() != n {
                    return Err(domain("build_initial", format!("{} product amplitudes for N = {n}", amplitudes.len())));
                }
                if amplitudes.iter().any(|q| (q[0].norm_sqr() + q[1].norm_sqr() - T::one()).abs() > tol) {
                    return Err(domain("build_initial", "each product factor must be normalized"));
                }
                ProductSum { n, terms: vec![ProductTerm { coeff: cx(T::one()), atoms: amplitudes.clone() }] }
            }
            InitialStateSpec::Noise { theta, varphi } => {
                if theta.len() != n || varphi.len() != n {
                    return Err(domain("build_initial", "noise angles must have one entry per atom"));
                }
                let atoms = theta
                    .iter()
                    .zip(varphi)
                    .map(|(&t, &p)| {
                        let (s, c) = (t / T::c(2.0)).sin_cos();
                        [cx(c), Complex::from_polar(s, p)]
                    })
                    .collect();
                ProductSum { n, terms: vec![ProductTerm { coeff: cx(T::one()), atoms }] }
            }
        })
    }
}

/// Initial N-atom state in the requested representation.
pub fn build_initial<T: Real>(spec: &InitialStateSpec<T>, n: usize, repr: Representation) -> Result<SpinState<T>> {
    let ps = spec.product_sum(n)?;
    match repr {
        Representation::Structured => Ok(SpinState::Structured(ps)),
        Representation::Dense => Ok(SpinState::Dense(ps.to_dense()?)),
        Representation::Auto if n <= DENSE_CAP => Ok(SpinState::Dense(ps.to_dense()?)),
        Representation::Auto => Ok(SpinState::Structured(ps)),
    }
}

impl<T: Real> ProductSum<T> {
    pub fn to_dense(&self) -> Result<DenseState<T>> {
        if self.n > DENSE_CAP {
            return Err(Error::Capacity { n: self.n, cap: DENSE_CAP });
        }
        let mut amplitudes = vec![cx(T::zero()); 1 << self.n];
        for term in &self.terms {
            for (j, a) in amplitudes.iter_mut().enumerate() {
                let mut v = term.coeff;
                for (k, q) in term.atoms.iter().enumerate() {
                    v = v * q[(j >> k) & 1];
                }
                *a = *a + v;
            }
        }
        Ok(DenseState { n: self.n, amplitudes })
    }

    pub fn apply_local(&mut self, us: &[Unitary2<T>]) {
        for term in &mut self.terms {
            for (q, u) in term.atoms.iter_mut().zip(us) {
                *q = u.apply(*q);
            }
        }
    }

    /// Σ_ab c_a* c_b Π_k f(u_k^a, u_k^b).
    fn pair_sum(&self, f: impl Fn(&Qubit<T>, &Qubit<T>) -> Complex<T>) -> T {
        let mut acc = cx(T::zero());
        for a in &self.terms {
            for b in &self.terms {
                let mut prod = a.coeff.conj() * b.coeff;
                for (qa, qb) in a.atoms.iter().zip(&b.atoms) {
                    prod = prod * f(qa, qb);
                }
                acc = acc + prod;
            }
        }
        acc.re
    }

    pub fn norm_sqr(&self) -> T {
        self.pair_sum(|a, b| a[0].conj() * b[0] + a[1].conj() * b[1])
    }

    pub fn parity_expectation(&self) -> T {
        self.pair_sum(|a, b| a[0].conj() * b[0] - a[1].conj() * b[1])
    }

    pub fn excitation_histogram(&self) -> Vec<T> {
        let n = self.n;
        let mut hist = vec![T::zero(); n + 1];
        for a in &self.terms {
            for b in &self.terms {
                // coefficients of Π_k (g_k + e_k z)
                let mut poly = vec![cx(T::zero()); n + 1];
                poly[0] = a.coeff.conj() * b.coeff;
                for (k, (qa, qb)) in a.atoms.iter().zip(&b.atoms).enumerate() {
                    let g = qa[0].conj() * qb[0];
                    let e = qa[1].conj() * qb[1];
                    for m in (1..=k + 1).rev() {
                        poly[m] = poly[m] * g + poly[m - 1] * e;
                    }
                    poly[0] = poly[0] * g;
                }
                for (h, p) in hist.iter_mut().zip(&poly) {
                    *h = *h + p.re;
                }
            }
        }
        hist
    }
}

impl<T: Real> DenseState<T> {
    pub fn apply_local(&mut self, us: &[Unitary2<T>]) {
        for (k, u) in us.iter().enumerate() {
            let bit = 1usize << k;
            for j in 0..self.amplitudes.len() {
                if j & bit == 0 {
                    let out = u.apply([self.amplitudes[j], self.amplitudes[j | bit]]);
                    self.amplitudes[j] = out[0];
                    self.amplitudes[j | bit] = out[1];
                }
            }
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn excitation_histogram(&self) -> Vec<T> {
        let mut hist = vec![T::zero(); self.n + 1];
        for (j, a) in self.amplitudes.iter().enumerate() {
            let m = j.count_ones() as usize;
            hist[m] = hist[m] + a.norm_sqr();
        }
        hist
    }

    /// ⟨⊗σ_z⟩ evaluated directly on the amplitudes.
    pub fn parity_expectation(&self) -> T {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(j, a)| if j.count_ones() % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }
}

impl<T: Real> SpinState<T> {
    pub fn n(&self) -> usize {
        match self {
            SpinState::Dense(d) => d.n,
            SpinState::Structured(s) => s.n,
        }
    }

    pub fn norm_sqr(&self) -> T {
        match self {
            SpinState::Dense(d) => d.norm_sqr(),
            SpinState::Structured(s) => s.norm_sqr(),
        }
    }

    pub fn apply_local_in_place(&mut self, us: &[Unitary2<T>]) -> Result<()> {
        if us.len() != self.n() {
            return Err(domain("apply_local", format!("{} unitaries for N = {}", us.len(), self.n())));
        }
        match self {
            SpinState::Dense(d) => d.apply_local(us),
            SpinState::Structured(s) => s.apply_local(us),
        }
        Ok(())
    }

    pub fn excitation_histogram(&self) -> Vec<T> {
        match self {
            SpinState::Dense(d) => d.excitation_histogram(),
            SpinState::Structured(s) => s.excitation_histogram(),
        }
    }

    pub fn parity_expectation(&self) -> T {
        match self {
            SpinState::Dense(d) => d.parity_expectation(),
            SpinState::Structured(s) => s.parity_expectation(),
        }
    }

    pub fn to_dense(&self) -> Result<DenseState<T>> {
        match self {
            SpinState::Dense(d) => Ok(d.clone()),
            SpinState::Structured(s) => s.to_dense(),
        }
    }
}

/// Tensor-product action of one unitary per atom.
pub fn apply_local<T: Real>(state: &SpinState<T>, us: &[Unitary2<T>]) -> Result<SpinState<T>> {
    let mut out = state.clone();
    out.apply_local_in_place(us)?;
    Ok(out)
}

/// P_M, the probability of M excited atoms.
pub fn excitation_histogram<T: Real>(state: &SpinState<T>) -> Vec<T> {
    state.excitation_histogram()
}

/// Σ_M P_M (−1)^M.
pub fn parity_from_histogram<T: Real>(hist: &[T]) -> T {
    hist.iter().enumerate().map(|(m, &p)| if m % 2 == 0 { p } else { -p }).sum()
}

pub fn parity_expectation<T: Real>(state: &SpinState<T>) -> T {
    state.parity_expectation()
}
