//! Data behind each figure and table, one CSV per panel.

use std::fmt;
use std::str::FromStr;

use ghz_budget::error_models::{
    budget_models, n_star, phase_uncertainty, pi0_atom_loss, pi0_measurement, pi0_momentum_spread, ErrorBudget,
    ParityModel,
};
use ghz_budget::momentum::eta_numeric;
use ghz_budget::pulse::Drive;
use ghz_budget::statevector::ShotConfig;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Column, Table};
use crate::sweep::{error_budget, momentum_eta, n_star_cell, run_mc, trap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8Loss,
    Table1,
    Table2,
}

impl FigureId {
    pub const ALL: [FigureId; 7] =
        [FigureId::Fig4, FigureId::Fig5, FigureId::Fig6, FigureId::Fig7, FigureId::Fig8Loss, FigureId::Table1, FigureId::Table2];

    pub fn id(self) -> &'static str {
        match self {
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8Loss => "fig8-loss",
            FigureId::Table1 => "table1",
            FigureId::Table2 => "table2",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        FigureId::ALL.into_iter().find(|f| f.id() == s).ok_or_else(|| {
            let ids: Vec<&str> = FigureId::ALL.iter().map(|f| f.id()).collect();
            CliError::Usage(format!("unknown figure id `{s}`; valid ids: {}", ids.join(", ")))
        })
    }
}

/// A row of the curve-parameter table: Ω_eff/2π, ν_trap, temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    pub name: &'static str,
    pub omega_eff: f64,
    pub nu_trap: f64,
    pub temperature: f64,
}

pub const CURVES: [CurveParams; 3] = [
    CurveParams { name: "yellow", omega_eff: 400e3, nu_trap: 14.5e3, temperature: 0.65e-6 },
    CurveParams { name: "red", omega_eff: 450e3, nu_trap: 10e3, temperature: 0.30e-6 },
    CurveParams { name: "blue", omega_eff: 600e3, nu_trap: 5.9e3, temperature: 0.10e-6 },
];

pub const MAX_N: u64 = 1000;
pub const FIG4_TEMPERATURES: [f64; 4] = [0.01e-6, 0.1e-6, 0.3e-6, 1e-6];
pub const FIG5_TEMPERATURES: [f64; 4] = [0.01e-6, 0.1e-6, 1e-6, 10e-6];
pub const FIG7_Q_DET: [f64; 3] = [1.3e-2, 5e-3, 6e-4];
pub const FIG8_Q_LOSS: [f64; 3] = [2e-2, 1e-2, 5e-3];

/// `points` values from `start` to `stop`, evenly spaced in log.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect()
}

pub fn emit_figure(cfg: &RunConfig, id: FigureId) -> CliResult<Vec<Table>> {
    match id {
        FigureId::Fig4 => fig4(cfg),
        FigureId::Fig5 => fig5(cfg),
        FigureId::Fig6 => fig6(cfg),
        FigureId::Fig7 => fig7(cfg),
        FigureId::Fig8Loss => fig8_loss(cfg),
        FigureId::Table1 => Ok(vec![table1(cfg)?]),
        FigureId::Table2 => Ok(vec![table2(cfg)?]),
    }
}

fn eta_at(cfg: &RunConfig, omega_eff: f64, nu_trap: f64, temperature: f64) -> CliResult<(f64, f64)> {
    let mut c = cfg.clone();
    c.raman.omega_eff = omega_eff;
    c.trap.nu_trap = nu_trap;
    c.trap.temperature = temperature;
    let r = eta_numeric(&trap(&c)?, &c.species(), std::f64::consts::TAU * omega_eff, &c.quadrature_spec())
        .map_err(|e| CliError::model(format!("eta_numeric at Ω/2π={omega_eff} Hz, ν={nu_trap} Hz, T={temperature} K"), e))?;
    Ok((r.eta_num, r.eta_approx))
}

fn eta_panels(
    cfg: &RunConfig,
    name: &str,
    axis: Column,
    xs: &[f64],
    temperatures: &[f64],
    at: impl Fn(f64, f64) -> (f64, f64, f64),
) -> CliResult<Vec<Table>> {
    let t_col = Column::new("temperature", "K", "atom temperature");
    let mut a = Table::new(
        format!("{name}a"),
        "eta by quadrature and leading-order eta",
        vec![
            t_col.clone(),
            axis.clone(),
            Column::new("eta_num", "", "eta by quadrature over the thermal momentum distribution"),
            Column::new("eta_approx", "", "leading-order eta, kappa*K^2*<E_vib>/(m*Omega_eff^2)"),
        ],
    );
    let mut b = Table::new(
        format!("{name}b"),
        "relative error of the leading-order eta",
        vec![t_col, axis, Column::new("relative_error", "", "|eta_approx - eta_num|/eta_num")],
    );
    for &t in temperatures {
        for &x in xs {
            let (omega, nu, temp) = at(x, t);
            let (num, approx) = eta_at(cfg, omega, nu, temp)?;
            a.push(vec![t.into(), x.into(), num.into(), approx.into()]);
            b.push(vec![t.into(), x.into(), ((approx - num).abs() / num).into()]);
        }
    }
    Ok(vec![a, b])
}

fn fig4(cfg: &RunConfig) -> CliResult<Vec<Table>> {
    let nu = 10e3;
    let xs = log_grid(100e3, 1e6, 31);
    let axis = Column::new("omega_eff", "Hz", "two-photon Rabi frequency Omega_eff/2pi");
    eta_panels(cfg, "fig4", axis, &xs, &FIG4_TEMPERATURES, |x, t| (x, nu, t))
}

fn fig5(cfg: &RunConfig) -> CliResult<Vec<Table>> {
    let omega = 300e3;
    let xs = log_grid(1e3, 200e3, 47);
    let axis = Column::new("nu_trap", "Hz", "trap frequency");
    eta_panels(cfg, "fig5", axis, &xs, &FIG5_TEMPERATURES, |x, t| (omega, x, t))
}

fn dphi(model: &ParityModel<f64>, n: u64) -> CliResult<f64> {
    phase_uncertainty(model.pi0_exact, n, None)
        .map(|p| p.value)
        .map_err(|e| CliError::model(format!("phase_uncertainty at N={n}"), e))
}

fn limits(n: u64) -> [Cell; 2] {
    let n = n as f64;
    [(1.0 / n).into(), (1.0 / n.sqrt()).into()]
}

fn hl_sql_columns() -> [Column; 2] {
    [
        Column::new("dphi_hl", "rad", "Heisenberg limit 1/N"),
        Column::new("dphi_sql", "rad", "standard quantum limit 1/sqrt(N)"),
    ]
}

fn fig6(cfg: &RunConfig) -> CliResult<Vec<Table>> {
    let mc_cap = if cfg.oracle.enabled { cfg.oracle.max_atoms.min(12) as u64 } else { 0 };
    let mut cols = vec![
        Column::new("curve", "", "parameter set name"),
        Column::new("eta_num", "", "eta by quadrature for this curve"),
        Column::new("n", "", "atoms in the GHZ state"),
        Column::new("dphi_num", "rad", "1/((1-eta_num)^N*N)"),
    ];
    cols.extend(hl_sql_columns());
    cols.extend([
        Column::new("pi0_num", "", "(1-eta_num)^N"),
        Column::new("mc_pi0", "", "Monte Carlo Pi0 with only the momentum spread; empty above the oracle atom cap"),
        Column::new("mc_se", "", "standard error of mc_pi0"),
    ]);
    let mut a = Table::new("fig6a", "dark-fringe phase uncertainty from the momentum spread", cols);
    let mut b = Table::new(
        "fig6b",
        "relative error of the leading-order phase uncertainty",
        vec![
            Column::new("curve", "", "parameter set name"),
            Column::new("n", "", "atoms in the GHZ state"),
            Column::new("relative_error", "", "|dphi_approx - dphi_num|/dphi_num with dphi_approx from eta_approx"),
        ],
    );
    for (k, c) in CURVES.iter().enumerate() {
        let (num, approx) = eta_at(cfg, c.omega_eff, c.nu_trap, c.temperature)?;
        let mut curve_cfg = cfg.clone();
        curve_cfg.raman.omega_eff = c.omega_eff;
        curve_cfg.trap.nu_trap = c.nu_trap;
        curve_cfg.trap.temperature = c.temperature;
        for n in 1..=MAX_N {
            let m = pi0_momentum_spread(n, num).map_err(|e| CliError::model("pi0_momentum_spread", e))?;
            let ma = pi0_momentum_spread(n, approx).map_err(|e| CliError::model("pi0_momentum_spread", e))?;
            let (d, da) = (dphi(&m, n)?, dphi(&ma, n)?);
            let mc = if n <= mc_cap { Some(momentum_mc(&curve_cfg, k as u64, n)?) } else { None };
            let mut row: Vec<Cell> = vec![c.name.into(), num.into(), n.into(), d.into()];
            row.extend(limits(n));
            row.extend([m.pi0_exact.into(), mc.map(|x| x.0).into(), mc.map(|x| x.1).into()]);
            a.push(row);
            b.push(vec![c.name.into(), n.into(), ((da - d).abs() / d).into()]);
        }
    }
    Ok(vec![a, b])
}

fn momentum_mc(cfg: &RunConfig, curve: u64, n: u64) -> CliResult<(f64, f64)> {
    let seed = cfg.oracle.seed ^ (curve << 32) ^ n;
    let mut shots = ShotConfig::new(cfg.oracle.shots, seed);
    shots.atom = cfg.species();
    shots.trap = Some(trap(cfg)?);
    let r = crate::sweep::raman(cfg);
    shots.drive = Drive::General { omega_eff: r.omega_eff, stark_shift: r.stark_shift };
    let s = run_mc(cfg, &shots, n as usize)?;
    Ok((s.pi0, s.std_error))
}

fn per_atom_figure(
    name: &str,
    description: &str,
    key: &str,
    key_description: &str,
    values: &[f64],
    model: impl Fn(u64, f64) -> ghz_budget::Result<ParityModel<f64>>,
) -> CliResult<Vec<Table>> {
    let mut cols = vec![
        Column::new(key, "", key_description),
        Column::new("n", "", "atoms in the GHZ state"),
        Column::new("pi0", "", "exact parity amplitude"),
        Column::new("pi0_small", "", "small-error parity amplitude"),
        Column::new("dphi", "rad", "dark-fringe phase uncertainty 1/(Pi0*N)"),
    ];
    cols.extend(hl_sql_columns());
    let mut t = Table::new(name, description, cols);
    for &q in values {
        for n in 1..=MAX_N {
            let m = model(n, q).map_err(|e| CliError::model(format!("{name} at {key}={q}, N={n}"), e))?;
            let mut row: Vec<Cell> = vec![q.into(), n.into(), m.pi0_exact.into(), m.pi0_small_error.into(), dphi(&m, n)?.into()];
            row.extend(limits(n));
            t.push(row);
        }
    }
    Ok(vec![t])
}

fn fig7(_cfg: &RunConfig) -> CliResult<Vec<Table>> {
    per_atom_figure(
        "fig7",
        "phase uncertainty under state-detection error",
        "q_det",
        "per-atom detection error probability",
        &FIG7_Q_DET,
        pi0_measurement,
    )
}

fn fig8_loss(_cfg: &RunConfig) -> CliResult<Vec<Table>> {
    per_atom_figure(
        "fig8-loss",
        "phase uncertainty under atom loss at a fixed number of cycles",
        "q_loss",
        "per-atom loss probability per cycle",
        &FIG8_Q_LOSS,
        pi0_atom_loss,
    )
}

pub fn table1(cfg: &RunConfig) -> CliResult<Table> {
    let mut t = Table::new(
        "table1",
        "momentum-spread curve parameters",
        vec![
            Column::new("curve", "", "parameter set name"),
            Column::new("omega_eff", "Hz", "Omega_eff/2pi"),
            Column::new("nu_trap", "Hz", "trap frequency"),
            Column::new("temperature", "K", "atom temperature"),
            Column::new("eta_num", "", "eta by quadrature"),
            Column::new("eta_approx", "", "leading-order eta"),
            Column::new("relative_error", "", "|eta_approx - eta_num|/eta_num"),
            Column::new("n_star", "", "largest N with (1-eta_num)^N >= 0.9"),
        ],
    );
    for c in CURVES {
        let (num, approx) = eta_at(cfg, c.omega_eff, c.nu_trap, c.temperature)?;
        let ns = n_star(num).map_err(|e| CliError::model("n_star", e))?;
        t.push(vec![
            c.name.into(),
            c.omega_eff.into(),
            c.nu_trap.into(),
            c.temperature.into(),
            num.into(),
            approx.into(),
            ((approx - num).abs() / num).into(),
            n_star_cell(ns),
        ]);
    }
    Ok(t)
}

pub fn table2(cfg: &RunConfig) -> CliResult<Table> {
    let n = cfg.sequence.atoms;
    let eta = momentum_eta(cfg)?.eta;
    let budget: ErrorBudget<f64> = error_budget(cfg, eta);
    let models = budget_models(&budget, n, &cfg.species()).map_err(|e| CliError::model("budget", e))?;
    let mut t = Table::new(
        "table2",
        "parity amplitude per error source at the configured budget",
        vec![
            Column::new("source", "", "error source"),
            Column::new("exact_formula", "", "exact parity amplitude"),
            Column::new("small_error_formula", "", "first-order parity amplitude"),
            Column::new("n", "", "atoms in the GHZ state"),
            Column::new("pi0_exact", "", "exact formula evaluated"),
            Column::new("pi0_small", "", "small-error formula evaluated"),
        ],
    );
    for (s, m) in models {
        t.push(vec![
            s.key().into(),
            s.exact_formula().into(),
            s.small_error_formula().into(),
            n.into(),
            m.pi0_exact.into(),
            m.pi0_small_error.into(),
        ]);
    }
    Ok(t)
}
