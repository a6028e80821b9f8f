//! Run configuration: TOML (or JSON) with unit-suffixed quantities, resolved to SI.

use std::path::{Path, PathBuf};

use ghz_budget::constants::{AtomSpecies, AMU};
use ghz_budget::distributions::{QuadratureScheme, QuadratureSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// A number in the field's default unit, or a string such as "600 kHz".
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Frequency,
    Temperature,
    Time,
    Acceleration,
    Mass,
    WaveNumber,
    Rate,
    Dimensionless,
}

impl Dim {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dim::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)],
            Dim::Temperature => &[("K", 1.0), ("mK", 1e-3), ("uK", 1e-6), ("µK", 1e-6), ("μK", 1e-6), ("nK", 1e-9)],
            Dim::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("µs", 1e-6), ("μs", 1e-6), ("ns", 1e-9)],
            Dim::Acceleration => &[("m/s^2", 1.0), ("m/s2", 1.0)],
            Dim::Mass => &[("kg", 1.0), ("u", AMU), ("amu", AMU)],
            Dim::WaveNumber => &[("1/m", 1.0), ("rad/m", 1.0)],
            Dim::Rate => &[("1/s", 1.0), ("rad/s", 1.0)],
            Dim::Dimensionless => &[("rad", 1.0), ("rad^2", 1.0)],
        }
    }

    pub fn si_unit(self) -> &'static str {
        match self {
            Dim::Frequency => "Hz",
            Dim::Temperature => "K",
            Dim::Time => "s",
            Dim::Acceleration => "m/s^2",
            Dim::Mass => "kg",
            Dim::WaveNumber => "1/m",
            Dim::Rate => "1/s",
            Dim::Dimensionless => "1",
        }
    }
}

/// Parses a quantity into the SI unit of `dim`; bare numbers are taken as SI.
pub fn parse_quantity(q: &Quantity, dim: Dim, field: &str) -> CliResult<f64> {
    let text = match q {
        Quantity::Number(x) => return Ok(*x),
        Quantity::Text(t) => t.trim(),
    };
    let bad = |why: String| CliError::Config(format!("{field}: cannot read \"{text}\": {why}"));
    let split = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()))
        .filter(|&i| i > 0 && text[..i].trim().parse::<f64>().is_ok())
        .last()
        .ok_or_else(|| bad("expected a number".into()))?;
    let value: f64 = text[..split].trim().parse().expect("checked above");
    let unit = text[split..].trim();
    if unit.is_empty() {
        return Ok(value);
    }
    dim.units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, f)| value * f)
        .ok_or_else(|| {
            let known: Vec<&str> = dim.units().iter().map(|(u, _)| *u).collect();
            bad(format!("unknown unit `{unit}`; expected one of {known:?}"))
        })
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConfig {
    atom: RawAtom,
    trap: RawTrap,
    raman: RawRaman,
    budget: RawBudget,
    sequence: RawSequence,
    quadrature: RawQuadrature,
    oracle: RawOracle,
    sweep: Vec<RawSweep>,
    output: RawOutput,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawAtom {
    preset: Option<String>,
    mass: Option<Quantity>,
    wave_number: Option<Quantity>,
    gamma_i: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawTrap {
    nu_trap: Option<Quantity>,
    temperature: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawRaman {
    omega_eff: Option<Quantity>,
    free_time: Option<Quantity>,
    acceleration: Option<Quantity>,
    epsilon: Option<Quantity>,
    stark_shift: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawBudget {
    q_zeta: Option<Quantity>,
    sigma_beta2: Option<Quantity>,
    xi: Option<Quantity>,
    sigma_theta2: Option<Quantity>,
    r_corr: Option<Quantity>,
    eta: Option<Quantity>,
    q_det: Option<Quantity>,
    delta_raman: Option<Quantity>,
    q_loss: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawSequence {
    atoms: Option<u64>,
    phi: Option<Quantity>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawQuadrature {
    scheme: Option<String>,
    nodes: Option<usize>,
    truncation: Option<f64>,
    rel_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOracle {
    enabled: Option<bool>,
    shots: Option<u64>,
    seed: Option<u64>,
    max_atoms: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    values: Option<Vec<Quantity>>,
    start: Option<Quantity>,
    stop: Option<Quantity>,
    points: Option<usize>,
    scale: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOutput {
    dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomSettings {
    pub preset: String,
    /// kg
    pub mass: f64,
    /// Effective wave number K, 1/m.
    pub wave_number: f64,
    /// Intermediate-state decay rate γᵢ, rad/s.
    pub gamma_i: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapSettings {
    /// Hz
    pub nu_trap: f64,
    /// K
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamanSettings {
    /// Ω_eff/2π, Hz.
    pub omega_eff: f64,
    /// s
    pub free_time: f64,
    /// m/s²
    pub acceleration: f64,
    pub epsilon: f64,
    /// δ^AC/2π, Hz.
    pub stark_shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetSettings {
    pub q_zeta: f64,
    pub sigma_beta2: f64,
    pub xi: f64,
    pub sigma_theta2: f64,
    pub r_corr: f64,
    /// Fixed η; `None` computes it from the trap and Raman settings.
    pub eta: Option<f64>,
    pub q_det: f64,
    /// Δ/2π, Hz; `None` switches spontaneous emission off.
    pub delta_raman: Option<f64>,
    pub q_loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SequenceSettings {
    pub atoms: u64,
    /// Operating phase; `None` is the dark fringe.
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSettings {
    pub scheme: &'static str,
    pub nodes: usize,
    pub truncation: f64,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSettings {
    pub enabled: bool,
    pub shots: u64,
    pub seed: u64,
    pub max_atoms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub parameter: String,
    /// In the parameter's SI unit.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub atom: AtomSettings,
    pub trap: TrapSettings,
    pub raman: RamanSettings,
    pub budget: BudgetSettings,
    pub sequence: SequenceSettings,
    pub quadrature: QuadratureSettings,
    pub oracle: OracleSettings,
    pub sweep: Vec<SweepAxis>,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

/// Reference budget used when a key is absent.
pub mod defaults {
    pub const NU_TRAP: f64 = 10e3;
    pub const TEMPERATURE: f64 = 0.1e-6;
    pub const OMEGA_EFF: f64 = 300e3;
    pub const FREE_TIME: f64 = 1e-3;
    pub const ACCELERATION: f64 = 9.8;
    pub const Q_ZETA: f64 = 0.01;
    pub const SIGMA_BETA2: f64 = 0.01;
    pub const XI: f64 = 1e-3;
    pub const SIGMA_THETA2: f64 = 1e-6;
    pub const R_CORR: f64 = 5.0;
    pub const Q_DET: f64 = 6e-4;
    pub const DELTA_RAMAN: f64 = 20e9;
    pub const Q_LOSS: f64 = 5e-3;
    pub const ATOMS: u64 = 10;
    pub const NODES: usize = 201;
    pub const SHOTS: u64 = 100_000;
    pub const MAX_ATOMS: usize = 12;
}

/// Sweepable parameters, their units and integrality.
pub const PARAMETERS: &[(&str, Dim)] = &[
    ("trap.nu_trap", Dim::Frequency),
    ("trap.temperature", Dim::Temperature),
    ("raman.omega_eff", Dim::Frequency),
    ("raman.free_time", Dim::Time),
    ("raman.acceleration", Dim::Acceleration),
    ("raman.epsilon", Dim::Dimensionless),
    ("raman.stark_shift", Dim::Frequency),
    ("budget.q_zeta", Dim::Dimensionless),
    ("budget.sigma_beta2", Dim::Dimensionless),
    ("budget.xi", Dim::Dimensionless),
    ("budget.sigma_theta2", Dim::Dimensionless),
    ("budget.r_corr", Dim::Dimensionless),
    ("budget.eta", Dim::Dimensionless),
    ("budget.q_det", Dim::Dimensionless),
    ("budget.delta_raman", Dim::Frequency),
    ("budget.q_loss", Dim::Dimensionless),
    ("sequence.atoms", Dim::Dimensionless),
    ("sequence.phi", Dim::Dimensionless),
];

pub fn parameter_dim(path: &str) -> Option<Dim> {
    PARAMETERS.iter().find(|(p, _)| *p == path).map(|(_, d)| *d)
}

fn opt(q: &Option<Quantity>, dim: Dim, field: &str, default: f64) -> CliResult<f64> {
    q.as_ref().map_or(Ok(default), |q| parse_quantity(q, dim, field))
}

fn opt_none(q: &Option<Quantity>, dim: Dim, field: &str) -> CliResult<Option<f64>> {
    q.as_ref().map(|q| parse_quantity(q, dim, field)).transpose()
}

impl Default for RunConfig {
    fn default() -> Self {
        RawConfig::default().resolve().expect("defaults are valid")
    }
}

impl RawConfig {
    fn resolve(self) -> CliResult<RunConfig> {
        let preset = self.atom.preset.unwrap_or_else(|| "cs133".into());
        let base: AtomSpecies<f64> = match preset.as_str() {
            "cs133" => AtomSpecies::cs133(),
            other => return Err(CliError::Config(format!("atom.preset: unknown preset `{other}`; expected \"cs133\""))),
        };
        let atom = AtomSettings {
            preset,
            mass: opt(&self.atom.mass, Dim::Mass, "atom.mass", base.mass)?,
            wave_number: opt(&self.atom.wave_number, Dim::WaveNumber, "atom.wave_number", base.wave_number)?,
            gamma_i: opt(&self.atom.gamma_i, Dim::Rate, "atom.gamma_i", base.gamma_i)?,
        };
        let t = &self.trap;
        let trap = TrapSettings {
            nu_trap: opt(&t.nu_trap, Dim::Frequency, "trap.nu_trap", defaults::NU_TRAP)?,
            temperature: opt(&t.temperature, Dim::Temperature, "trap.temperature", defaults::TEMPERATURE)?,
        };
        let r = &self.raman;
        let raman = RamanSettings {
            omega_eff: opt(&r.omega_eff, Dim::Frequency, "raman.omega_eff", defaults::OMEGA_EFF)?,
            free_time: opt(&r.free_time, Dim::Time, "raman.free_time", defaults::FREE_TIME)?,
            acceleration: opt(&r.acceleration, Dim::Acceleration, "raman.acceleration", defaults::ACCELERATION)?,
            epsilon: opt(&r.epsilon, Dim::Dimensionless, "raman.epsilon", 0.0)?,
            stark_shift: opt(&r.stark_shift, Dim::Frequency, "raman.stark_shift", 0.0)?,
        };
        let b = &self.budget;
        let d = Dim::Dimensionless;
        let budget = BudgetSettings {
            q_zeta: opt(&b.q_zeta, d, "budget.q_zeta", defaults::Q_ZETA)?,
            sigma_beta2: opt(&b.sigma_beta2, d, "budget.sigma_beta2", defaults::SIGMA_BETA2)?,
            xi: opt(&b.xi, d, "budget.xi", defaults::XI)?,
            sigma_theta2: opt(&b.sigma_theta2, d, "budget.sigma_theta2", defaults::SIGMA_THETA2)?,
            r_corr: opt(&b.r_corr, d, "budget.r_corr", defaults::R_CORR)?,
            eta: opt_none(&b.eta, d, "budget.eta")?,
            q_det: opt(&b.q_det, d, "budget.q_det", defaults::Q_DET)?,
            delta_raman: match &b.delta_raman {
                None => Some(defaults::DELTA_RAMAN),
                Some(Quantity::Text(s)) if s.trim() == "off" => None,
                Some(q) => Some(parse_quantity(q, Dim::Frequency, "budget.delta_raman")?),
            },
            q_loss: opt(&b.q_loss, d, "budget.q_loss", defaults::Q_LOSS)?,
        };
        let sequence = SequenceSettings {
            atoms: self.sequence.atoms.unwrap_or(defaults::ATOMS),
            phi: opt_none(&self.sequence.phi, d, "sequence.phi")?,
        };
        let scheme = match self.quadrature.scheme.as_deref().unwrap_or("gauss-hermite") {
            "gauss-hermite" => "gauss-hermite",
            "adaptive" => "adaptive",
            other => {
                return Err(CliError::Config(format!(
                    "quadrature.scheme: unknown scheme `{other}`; expected \"gauss-hermite\" or \"adaptive\""
                )))
            }
        };
        let dq = QuadratureSpec::default();
        let quadrature = QuadratureSettings {
            scheme,
            nodes: self.quadrature.nodes.unwrap_or(defaults::NODES),
            truncation: self.quadrature.truncation.unwrap_or(dq.truncation),
            rel_tol: self.quadrature.rel_tol.unwrap_or(dq.rel_tol),
        };
        let oracle = OracleSettings {
            enabled: self.oracle.enabled.unwrap_or(false),
            shots: self.oracle.shots.unwrap_or(defaults::SHOTS),
            seed: self.oracle.seed.unwrap_or(0),
            max_atoms: self.oracle.max_atoms.unwrap_or(defaults::MAX_ATOMS),
        };
        let sweep = self.sweep.iter().map(resolve_axis).collect::<CliResult<Vec<_>>>()?;
        let cfg = RunConfig {
            atom,
            trap,
            raman,
            budget,
            sequence,
            quadrature,
            oracle,
            sweep,
            output_dir: self.output.dir.unwrap_or_else(|| PathBuf::from("out")),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn resolve_axis(raw: &RawSweep) -> CliResult<SweepAxis> {
    let name = &raw.parameter;
    let dim = parameter_dim(name).ok_or_else(|| {
        let known: Vec<&str> = PARAMETERS.iter().map(|(p, _)| *p).collect();
        CliError::Config(format!("sweep.parameter: `{name}` is not a sweepable config path; expected one of {known:?}"))
    })?;
    let field = format!("sweep[{name}]");
    let mut values = match (&raw.values, &raw.start, &raw.stop) {
        (Some(v), None, None) => {
            if raw.points.is_some() || raw.scale.is_some() {
                return Err(CliError::Config(format!("{field}: `values` excludes points/scale")));
            }
            v.iter().map(|q| parse_quantity(q, dim, &field)).collect::<CliResult<Vec<_>>>()?
        }
        (None, Some(a), Some(b)) => {
            let a = parse_quantity(a, dim, &format!("{field}.start"))?;
            let b = parse_quantity(b, dim, &format!("{field}.stop"))?;
            let points = raw.points.ok_or_else(|| CliError::Config(format!("{field}: `points` is required with start/stop")))?;
            if points < 2 {
                return Err(CliError::Config(format!("{field}.points must be >= 2, got {points}")));
            }
            if a == b || !a.is_finite() || !b.is_finite() {
                return Err(CliError::Config(format!("{field}: range [{a}, {b}] is degenerate")));
            }
            let last = (points - 1) as f64;
            match raw.scale.as_deref().unwrap_or("linear") {
                "linear" => (0..points).map(|i| a + (b - a) * i as f64 / last).collect(),
                "log" => {
                    if !(a > 0.0 && b > 0.0) {
                        return Err(CliError::Config(format!("{field}: log scale needs start, stop > 0")));
                    }
                    let (la, lb) = (a.ln(), b.ln());
                    (0..points).map(|i| (la + (lb - la) * i as f64 / last).exp()).collect()
                }
                other => return Err(CliError::Config(format!("{field}.scale: `{other}`; expected \"linear\" or \"log\""))),
            }
        }
        _ => return Err(CliError::Config(format!("{field}: give either `values` or `start`, `stop` and `points`"))),
    };
    if values.is_empty() {
        return Err(CliError::Config(format!("{field}: no values")));
    }
    if name == "sequence.atoms" {
        for v in values.iter_mut() {
            *v = v.round();
        }
        values.dedup();
    }
    Ok(SweepAxis { parameter: name.clone(), values })
}

fn check(ok: bool, field: &str, rule: &str, value: f64) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("{field} {rule}, got {value}")))
    }
}

fn prob(field: &str, q: f64, allow_one: bool) -> CliResult<()> {
    let ok = q >= 0.0 && if allow_one { q <= 1.0 } else { q < 1.0 };
    check(ok, field, if allow_one { "must lie in [0, 1]" } else { "must lie in [0, 1)" }, q)
}

fn nonneg(field: &str, v: f64) -> CliResult<()> {
    check(v >= 0.0 && v.is_finite(), field, "must be finite and >= 0", v)
}

fn positive(field: &str, v: f64) -> CliResult<()> {
    check(v > 0.0 && v.is_finite(), field, "must be finite and > 0", v)
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        positive("atom.mass", self.atom.mass)?;
        positive("atom.wave_number", self.atom.wave_number)?;
        nonneg("atom.gamma_i", self.atom.gamma_i)?;
        positive("trap.nu_trap", self.trap.nu_trap)?;
        nonneg("trap.temperature", self.trap.temperature)?;
        positive("raman.omega_eff", self.raman.omega_eff)?;
        positive("raman.free_time", self.raman.free_time)?;
        check(self.raman.acceleration.is_finite(), "raman.acceleration", "must be finite", self.raman.acceleration)?;
        check(self.raman.epsilon.is_finite(), "raman.epsilon", "must be finite", self.raman.epsilon)?;
        check(self.raman.stark_shift.is_finite(), "raman.stark_shift", "must be finite", self.raman.stark_shift)?;
        let b = &self.budget;
        prob("budget.q_zeta", b.q_zeta, true)?;
        nonneg("budget.sigma_beta2", b.sigma_beta2)?;
        nonneg("budget.xi", b.xi)?;
        nonneg("budget.sigma_theta2", b.sigma_theta2)?;
        check((1.0..=5.0).contains(&b.r_corr), "budget.r_corr", "must lie in [1, 5]", b.r_corr)?;
        if let Some(eta) = b.eta {
            prob("budget.eta", eta, false)?;
        }
        prob("budget.q_det", b.q_det, false)?;
        if let Some(d) = b.delta_raman {
            positive("budget.delta_raman", d)?;
        }
        prob("budget.q_loss", b.q_loss, false)?;
        check(self.sequence.atoms >= 1, "sequence.atoms", "must be >= 1", self.sequence.atoms as f64)?;
        if let Some(phi) = self.sequence.phi {
            check(phi.is_finite(), "sequence.phi", "must be finite", phi)?;
        }
        self.quadrature_spec().validate().map_err(|e| CliError::Config(format!("quadrature: {e}")))?;
        check(self.oracle.shots >= 1, "oracle.shots", "must be >= 1", self.oracle.shots as f64)?;
        check(self.oracle.max_atoms >= 1, "oracle.max_atoms", "must be >= 1", self.oracle.max_atoms as f64)?;
        for (i, a) in self.sweep.iter().enumerate() {
            if self.sweep[..i].iter().any(|b| b.parameter == a.parameter) {
                return Err(CliError::Config(format!("sweep: `{}` is swept twice", a.parameter)));
            }
            for &v in &a.values {
                let mut c = self.clone();
                c.sweep.clear();
                c.set(&a.parameter, v)?;
                c.validate()
                    .map_err(|e| CliError::Config(format!("sweep[{}] value {v}: {}", a.parameter, strip(&e))))?;
            }
        }
        Ok(())
    }

    /// Sets a sweepable parameter, in SI units.
    pub fn set(&mut self, path: &str, v: f64) -> CliResult<()> {
        match path {
            "trap.nu_trap" => self.trap.nu_trap = v,
            "trap.temperature" => self.trap.temperature = v,
            "raman.omega_eff" => self.raman.omega_eff = v,
            "raman.free_time" => self.raman.free_time = v,
            "raman.acceleration" => self.raman.acceleration = v,
            "raman.epsilon" => self.raman.epsilon = v,
            "raman.stark_shift" => self.raman.stark_shift = v,
            "budget.q_zeta" => self.budget.q_zeta = v,
            "budget.sigma_beta2" => self.budget.sigma_beta2 = v,
            "budget.xi" => self.budget.xi = v,
            "budget.sigma_theta2" => self.budget.sigma_theta2 = v,
            "budget.r_corr" => self.budget.r_corr = v,
            "budget.eta" => self.budget.eta = Some(v),
            "budget.q_det" => self.budget.q_det = v,
            "budget.delta_raman" => self.budget.delta_raman = Some(v),
            "budget.q_loss" => self.budget.q_loss = v,
            "sequence.atoms" => {
                if !(v >= 1.0 && v.fract() == 0.0 && v <= u64::MAX as f64) {
                    return Err(CliError::Config(format!("sequence.atoms must be a positive integer, got {v}")));
                }
                self.sequence.atoms = v as u64
            }
            "sequence.phi" => self.sequence.phi = Some(v),
            other => return Err(CliError::Config(format!("`{other}` is not a sweepable config path"))),
        }
        Ok(())
    }

    pub fn species(&self) -> AtomSpecies<f64> {
        AtomSpecies {
            name: self.atom.preset.clone(),
            mass: self.atom.mass,
            wave_number: self.atom.wave_number,
            gamma_i: self.atom.gamma_i,
        }
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            scheme: if self.quadrature.scheme == "adaptive" {
                QuadratureScheme::AdaptiveSimpson
            } else {
                QuadratureScheme::GaussHermite
            },
            node_count: self.quadrature.nodes,
            truncation: self.quadrature.truncation,
            rel_tol: self.quadrature.rel_tol,
        }
    }

    /// SHA-256 of the canonical JSON form; the output directory is excluded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

fn strip(e: &CliError) -> String {
    match e {
        CliError::Config(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Parses TOML, or JSON when the extension is `.json`.
pub fn parse_config(text: &str, json: bool) -> CliResult<RunConfig> {
    let raw: RawConfig = if json {
        serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?
    } else {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))?
    };
    raw.resolve()
}

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    parse_config(&text, json).map_err(|e| match e {
        CliError::Config(s) => CliError::Config(format!("{}: {s}", path.display())),
        other => other,
    })
}
