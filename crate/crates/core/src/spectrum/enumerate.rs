use serde::{Deserialize, Serialize};

use super::shooting::{find_eigenvalue_with, polish_eigenvalue, shoot, Eigenvalue};
use super::wavefunction::{reconstruct_wavefunction, BoundState};
use crate::error::{Error, Result};
use crate::io::{csv_table, round_g12};
use crate::model::ModelParams;
use crate::ode::IntegratorConfig;
use crate::par::{self, Execution};
use crate::roots::RootTables;

/// Couplings closer than this to a threshold are treated as sitting on it.
pub const THRESHOLD_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    pub gamma: f64,
    pub j_index: usize,
    pub n_index: usize,
    pub ground_winding: u32,
    pub count: usize,
    /// Ordered by winding.
    pub states: Vec<BoundState>,
}

pub fn enumerate_bound_states(
    gamma: f64,
    tol: f64,
    tables: &RootTables,
    config: &IntegratorConfig,
) -> Result<SpectrumSummary> {
    enumerate_bound_states_with(Execution::default(), gamma, tol, tables, config)
}

/// One bisection per winding n ≤ N < j, then the wavefunction of each.
pub fn enumerate_bound_states_with(
    exec: Execution,
    gamma: f64,
    tol: f64,
    tables: &RootTables,
    config: &IntegratorConfig,
) -> Result<SpectrumSummary> {
    check_coupling(gamma, tables)?;
    let (j, n) = tables.interval_indices(gamma)?;
    let windings: Vec<u32> = (n as u32..j as u32).collect();
    let states = par::map(exec, &windings, |&w| solve_state(gamma, w, tol, tables, config));
    let states: Vec<BoundState> = states.into_iter().collect::<Result<_>>()?;
    for pair in states.windows(2) {
        if pair[1].energy <= pair[0].energy {
            return Err(Error::OrderingViolation { winding: pair[1].winding });
        }
    }
    Ok(SpectrumSummary { gamma, j_index: j, n_index: n, ground_winding: n as u32, count: j - n, states })
}

fn check_coupling(gamma: f64, tables: &RootTables) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::BadParameter(format!("gamma must be > 0, got {gamma}")));
    }
    let nearest = tables.nearest_entry(gamma);
    if (nearest - gamma).abs() < THRESHOLD_GUARD {
        return Err(Error::ThresholdDegenerate { gamma, threshold: nearest });
    }
    Ok(())
}

fn solve_state(
    gamma: f64,
    winding: u32,
    tol: f64,
    tables: &RootTables,
    config: &IntegratorConfig,
) -> Result<BoundState> {
    bound_state(gamma, winding, tol, tables, config)?
        .ok_or(Error::CountMismatch { expected: winding as usize + 1, found: winding as usize })
}

/// The single state of winding `winding`, or `None` if the tables rule it out.
pub fn bound_state(
    gamma: f64,
    winding: u32,
    tol: f64,
    tables: &RootTables,
    config: &IntegratorConfig,
) -> Result<Option<BoundState>> {
    check_coupling(gamma, tables)?;
    let Some(eig) = find_eigenvalue_with(gamma, winding, tol, tables, config)? else {
        return Ok(None);
    };
    let Eigenvalue { energy, low_confidence, .. } = polish_eigenvalue(gamma, &eig, config)?;
    let params = ModelParams::new(gamma, energy)?;
    let (orbit, _) = shoot(&params, winding, config)?;
    let mut state = reconstruct_wavefunction(&orbit, &params, None)?;
    state.low_confidence = low_confidence;
    Ok(Some(state))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub winding: u32,
    pub energy: f64,
    pub density_csv_path: String,
}

/// The exported form of a spectrum, numbers rounded to 12 significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub gamma: f64,
    pub ground_winding: u32,
    pub count: usize,
    pub states: Vec<StateRecord>,
}

impl SpectrumSummary {
    pub fn energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    pub fn to_record<F: Fn(&BoundState) -> String>(&self, density_path: F) -> SpectrumRecord {
        SpectrumRecord {
            gamma: round_g12(self.gamma),
            ground_winding: self.ground_winding,
            count: self.count,
            states: self
                .states
                .iter()
                .map(|s| StateRecord {
                    winding: s.winding,
                    energy: round_g12(s.energy),
                    density_csv_path: density_path(s),
                })
                .collect(),
        }
    }
}

impl SpectrumRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadParameter(format!("bad spectrum json: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StairStep {
    pub gamma: f64,
    pub ground_winding: usize,
    pub count: usize,
}

/// Bound-state count from the tables alone. Couplings on a threshold are
/// moved just past it.
pub fn stair_step(gamma: f64, tables: &RootTables) -> Result<StairStep> {
    let nearest = tables.nearest_entry(gamma);
    let gamma = if (nearest - gamma).abs() < THRESHOLD_GUARD { nearest + 2.0 * THRESHOLD_GUARD } else { gamma };
    let (j, n) = tables.interval_indices(gamma)?;
    Ok(StairStep { gamma, ground_winding: n, count: j - n })
}

pub fn staircase(gamma_min: f64, gamma_max: f64, steps: usize, tables: &RootTables) -> Result<Vec<StairStep>> {
    staircase_with(Execution::default(), gamma_min, gamma_max, steps, tables)
}

/// `steps` evenly spaced couplings from `gamma_min` to `gamma_max` inclusive.
pub fn staircase_with(
    exec: Execution,
    gamma_min: f64,
    gamma_max: f64,
    steps: usize,
    tables: &RootTables,
) -> Result<Vec<StairStep>> {
    if !(gamma_min > 0.0 && gamma_max > gamma_min && gamma_max.is_finite()) || steps < 2 {
        return Err(Error::BadParameter(format!(
            "need 0 < gamma_min < gamma_max and steps >= 2, got ({gamma_min}, {gamma_max}, {steps})"
        )));
    }
    let h = (gamma_max - gamma_min) / (steps - 1) as f64;
    par::map_range(exec, steps, |i| {
        let g = if i == steps - 1 { gamma_max } else { gamma_min + h * i as f64 };
        stair_step(g, tables)
    })
    .into_iter()
    .collect()
}

pub fn staircase_csv(steps: &[StairStep]) -> String {
    let rows: Vec<[f64; 3]> = steps.iter().map(|s| [s.gamma, s.ground_winding as f64, s.count as f64]).collect();
    csv_table(&["gamma", "ground_winding", "count"], rows.iter().map(|r| r.as_slice()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub gamma: f64,
    /// `None` where the winding has no bound state.
    pub energy: Option<f64>,
}

/// E_N(γ) over a list of couplings.
pub fn energy_curve(
    exec: Execution,
    winding: u32,
    gammas: &[f64],
    tol: f64,
    tables: &RootTables,
    config: &IntegratorConfig,
) -> Result<Vec<CurvePoint>> {
    par::map(exec, gammas, |&gamma| {
        let e = find_eigenvalue_with(gamma, winding, tol, tables, config)?;
        Ok(CurvePoint { gamma, energy: e.map(|e| e.energy) })
    })
    .into_iter()
    .collect()
}

/// Rows of (gamma, energy) for the couplings where the state exists.
pub fn energy_curve_csv(points: &[CurvePoint]) -> String {
    let rows: Vec<[f64; 2]> = points.iter().filter_map(|p| p.energy.map(|e| [p.gamma, e])).collect();
    csv_table(&["gamma", "energy"], rows.iter().map(|r| r.as_slice()))
}
