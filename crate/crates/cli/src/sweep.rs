//! Single-point evaluation of the full budget and Cartesian parameter sweeps.

use std::f64::consts::TAU;

use ghz_budget::distributions::TrapConfig;
use ghz_budget::error_models::{
    budget_models, n_star, phase_uncertainty, pi0_total, q_spontaneous, ErrorBudget, ErrorSource, NStar, ParityModel,
};
use ghz_budget::momentum::{eta_numeric, eta_tot_theta, eta_tot_theta_approx, RamanConfig};
use ghz_budget::pulse::{Drive, SequenceKind, SequenceSpec};
use ghz_budget::statevector::{
    estimate_pi0, monte_carlo_parity, phi_grid, InitialStateSpec, LaserPhaseNoise, PulseAreaNoise, ShotConfig,
    StatePrepNoise,
};
use rayon::prelude::*;

use crate::config::{parameter_dim, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{format_number, Cell, Column, Table};

pub const GRID_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumEta {
    pub eta: f64,
    /// Leading-order estimate; `None` when η is fixed in the config.
    pub eta_approx: Option<f64>,
    /// Fringe shift from chirp mismatch, rad.
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSummary {
    pub pi0: f64,
    pub std_error: f64,
    pub kept_fraction: f64,
    pub quadrature: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub n: u64,
    pub eta: MomentumEta,
    pub models: Vec<(ErrorSource, ParityModel<f64>)>,
    pub total: ParityModel<f64>,
    pub dphi: f64,
    pub dphi_small: f64,
    pub n_star: NStar,
    pub mc: Option<McSummary>,
}

pub fn trap(cfg: &RunConfig) -> CliResult<TrapConfig<f64>> {
    TrapConfig::new(cfg.trap.nu_trap, cfg.trap.temperature).map_err(|e| CliError::model("trap", e))
}

pub fn raman(cfg: &RunConfig) -> RamanConfig<f64> {
    RamanConfig {
        omega_eff: TAU * cfg.raman.omega_eff,
        free_time: cfg.raman.free_time,
        acceleration: cfg.raman.acceleration,
        epsilon: cfg.raman.epsilon,
        stark_shift: TAU * cfg.raman.stark_shift,
    }
}

/// η from the config, or from the thermal spread (with chirp mismatch when ε ≠ 0).
pub fn momentum_eta(cfg: &RunConfig) -> CliResult<MomentumEta> {
    if let Some(eta) = cfg.budget.eta {
        return Ok(MomentumEta { eta, eta_approx: None, theta: None });
    }
    let atom = cfg.species();
    let trap = trap(cfg)?;
    let r = raman(cfg);
    let q = cfg.quadrature_spec();
    if cfg.raman.epsilon == 0.0 {
        let e = eta_numeric(&trap, &atom, r.omega_eff, &q).map_err(|e| CliError::model("eta_numeric", e))?;
        return Ok(MomentumEta { eta: e.eta_num, eta_approx: Some(e.eta_approx), theta: Some(0.0) });
    }
    let c = eta_tot_theta(&trap, &atom, &r, &q).map_err(|e| CliError::model("eta_tot_theta", e))?;
    let a = eta_tot_theta_approx(&trap, &atom, &r).map_err(|e| CliError::model("eta_tot_theta_approx", e))?;
    Ok(MomentumEta { eta: c.eta_tot, eta_approx: Some(a.eta_tot), theta: Some(c.theta) })
}

pub fn error_budget(cfg: &RunConfig, eta: f64) -> ErrorBudget<f64> {
    let b = &cfg.budget;
    ErrorBudget {
        q_zeta: b.q_zeta,
        sigma_beta2: b.sigma_beta2,
        xi: b.xi,
        sigma_theta2: b.sigma_theta2,
        r_corr: b.r_corr,
        eta,
        q_det: b.q_det,
        delta_raman: b.delta_raman.map_or(f64::INFINITY, |d| TAU * d),
        q_loss: b.q_loss,
    }
}

/// Monte Carlo over every enabled source at once.
pub fn monte_carlo(cfg: &RunConfig, n: usize) -> CliResult<McSummary> {
    let atom = cfg.species();
    let b = &cfg.budget;
    let mut shots = ShotConfig::new(cfg.oracle.shots, cfg.oracle.seed);
    shots.atom = atom.clone();
    shots.trap = Some(trap(cfg)?);
    if b.eta.is_none() {
        let r = raman(cfg);
        shots.drive = Drive::General { omega_eff: r.omega_eff, stark_shift: r.stark_shift };
    }
    if b.q_zeta > 0.0 || b.sigma_beta2 > 0.0 {
        shots.state_prep = Some(StatePrepNoise { q_zeta: b.q_zeta, sigma_beta2: b.sigma_beta2 });
    }
    if b.xi > 0.0 {
        let (sigma_v2, sigma_w2) = ghz_budget::error_models::pulse_area_variances(b.xi);
        shots.pulse_area = Some(PulseAreaNoise { sigma_v2, sigma_w2 });
    }
    if b.sigma_theta2 > 0.0 {
        shots.laser_phase = Some(LaserPhaseNoise { sigma_theta2: b.sigma_theta2, r_corr: b.r_corr });
    }
    shots.q_det = b.q_det;
    shots.q_loss = b.q_loss;
    if let Some(d) = b.delta_raman {
        shots.q_se = q_spontaneous(TAU * d, &atom).map_err(|e| CliError::model("q_spontaneous", e))?;
    }
    run_mc(cfg, &shots, n)
}

pub fn run_mc(cfg: &RunConfig, shots: &ShotConfig<f64>, n: usize) -> CliResult<McSummary> {
    let seq = SequenceSpec::with_epsilon(
        SequenceKind::TwoPulse,
        cfg.raman.free_time,
        cfg.raman.acceleration,
        cfg.raman.epsilon,
        &shots.atom,
    )
    .map_err(|e| CliError::model("sequence", e))?;
    let fit = monte_carlo_parity(&InitialStateSpec::Ghz, &seq, shots, n, &phi_grid(n, GRID_POINTS))
        .map_err(|e| CliError::model("monte_carlo_parity", e))?;
    let est = estimate_pi0(&fit);
    Ok(McSummary { pi0: est.pi0, std_error: est.std_error, kept_fraction: est.kept_fraction, quadrature: fit.quadrature })
}

pub fn evaluate(cfg: &RunConfig) -> CliResult<PointResult> {
    let n = cfg.sequence.atoms;
    let eta = momentum_eta(cfg)?;
    let atom = cfg.species();
    let models = budget_models(&error_budget(cfg, eta.eta), n, &atom).map_err(|e| CliError::model("budget", e))?;
    let only: Vec<ParityModel<f64>> = models.iter().map(|(_, m)| *m).collect();
    let total = pi0_total(&only).map_err(|e| CliError::model("pi0_total", e))?;
    let dphi = phase_uncertainty(total.pi0_exact, n, cfg.sequence.phi).map_err(|e| CliError::model("phase_uncertainty", e))?;
    let dphi_small = if total.pi0_small_error > 0.0 {
        phase_uncertainty(total.pi0_small_error.min(1.0), n, cfg.sequence.phi)
            .map_err(|e| CliError::model("phase_uncertainty", e))?
            .value
    } else {
        f64::INFINITY
    };
    let n_star = n_star(eta.eta).map_err(|e| CliError::model("n_star", e))?;
    let mc = if cfg.oracle.enabled && n as usize <= cfg.oracle.max_atoms {
        Some(monte_carlo(cfg, n as usize)?)
    } else {
        None
    };
    Ok(PointResult { n, eta, models, total, dphi: dphi.value, dphi_small, n_star, mc })
}

pub fn n_star_cell(n: NStar) -> Cell {
    match n {
        NStar::Bounded(v) => Cell::Int(v),
        NStar::Unbounded => Cell::Text("inf".into()),
    }
}

fn result_columns() -> Vec<Column> {
    let mut cols = vec![
        Column::new("n", "", "atoms in the GHZ state"),
        Column::new("eta", "", "per-atom parity loss from the thermal momentum spread (quadrature, or fixed in config)"),
        Column::new("eta_approx", "", "leading-order eta; empty when eta is fixed in config"),
        Column::new("theta", "rad", "fringe shift from chirp mismatch; empty when eta is fixed in config"),
    ];
    for s in ErrorSource::ALL {
        cols.push(Column::new(format!("pi0_{}_exact", s.key()), "", format!("Pi0 from {}: {}", s.key(), s.exact_formula())));
        cols.push(Column::new(
            format!("pi0_{}_small", s.key()),
            "",
            format!("small-error Pi0 from {}: {}", s.key(), s.small_error_formula()),
        ));
    }
    cols.extend([
        Column::new("pi0_total_exact", "", "product of the exact per-source amplitudes"),
        Column::new("pi0_total_small", "", "1 minus the sum of small-error deficits"),
        Column::new("dphi", "rad", "phase uncertainty at the operating phase from pi0_total_exact"),
        Column::new("dphi_small", "rad", "phase uncertainty from pi0_total_small"),
        Column::new("dphi_hl", "rad", "Heisenberg limit 1/N"),
        Column::new("dphi_sql", "rad", "standard quantum limit 1/sqrt(N)"),
        Column::new("n_star", "", "largest N with (1-eta)^N >= 0.9"),
        Column::new("mc_pi0", "", "Monte Carlo Pi0 (fringe amplitude times sqrt of kept fraction); empty when the oracle is off"),
        Column::new("mc_se", "", "standard error of mc_pi0"),
        Column::new("mc_kept_fraction", "", "fraction of shots without atom loss"),
    ]);
    cols
}

fn result_cells(r: &PointResult) -> Vec<Cell> {
    let n = r.n as f64;
    let mut cells: Vec<Cell> =
        vec![r.n.into(), r.eta.eta.into(), r.eta.eta_approx.into(), r.eta.theta.into()];
    for (_, m) in &r.models {
        cells.push(m.pi0_exact.into());
        cells.push(m.pi0_small_error.into());
    }
    cells.extend([
        r.total.pi0_exact.into(),
        r.total.pi0_small_error.into(),
        r.dphi.into(),
        r.dphi_small.into(),
        (1.0 / n).into(),
        (1.0 / n.sqrt()).into(),
        n_star_cell(r.n_star),
        r.mc.map(|m| m.pi0).into(),
        r.mc.map(|m| m.std_error).into(),
        r.mc.map(|m| m.kept_fraction).into(),
    ]);
    cells
}

/// All sweep points, first axis slowest.
pub fn sweep_points(cfg: &RunConfig) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in &cfg.sweep {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

pub fn run_sweep(cfg: &RunConfig) -> CliResult<Table> {
    let mut cols: Vec<Column> = cfg
        .sweep
        .iter()
        .map(|a| {
            let dim = parameter_dim(&a.parameter).expect("validated parameter");
            Column::new(a.parameter.clone(), dim.si_unit(), "swept parameter")
        })
        .collect();
    cols.extend(result_columns());
    let mut table = Table::new("sweep", "full error budget at each sweep point", cols);
    let points = sweep_points(cfg);
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|p| {
            let mut c = cfg.clone();
            for (axis, &v) in cfg.sweep.iter().zip(p) {
                c.set(&axis.parameter, v)?;
            }
            let r = evaluate(&c).map_err(|e| annotate(e, cfg, p))?;
            let mut row: Vec<Cell> = p.iter().map(|&v| Cell::Num(v)).collect();
            row.extend(result_cells(&r));
            Ok(row)
        })
        .collect::<CliResult<_>>()?;
    for r in rows {
        table.push(r);
    }
    Ok(table)
}

fn annotate(e: CliError, cfg: &RunConfig, p: &[f64]) -> CliError {
    let at: Vec<String> =
        cfg.sweep.iter().zip(p).map(|(a, v)| format!("{}={}", a.parameter, format_number(*v))).collect();
    let at = if at.is_empty() { "single point".to_string() } else { at.join(", ") };
    match e {
        CliError::Model { context, source } => CliError::Model { context: format!("sweep point {at}: {context}"), source },
        CliError::Config(s) => CliError::Config(format!("sweep point {at}: {s}")),
        other => other,
    }
}
