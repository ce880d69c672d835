//! File writers. Every number goes through `%.12g`, rows end in LF.

use std::fs;
use std::path::{Path, PathBuf};

use screened_dirac::io::{csv_table, format_g12, round_g12};
use screened_dirac::roots::RootTables;
use screened_dirac::spectrum::{BoundState, SpectrumRecord, StairStep};
use serde::Serialize;

use crate::error::CliError;

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// File-name fragment for a state, e.g. `gamma7.5_winding1`.
pub fn state_tag(gamma: f64, winding: u32) -> String {
    format!("gamma{}_winding{winding}", format_g12(gamma))
}

pub fn spectrum_csv(record: &SpectrumRecord) -> String {
    let mut out = String::from("winding,energy,density_csv_path\n");
    for s in &record.states {
        out.push_str(&format!("{},{},{}\n", s.winding, format_g12(s.energy), s.density_csv_path));
    }
    out
}

fn rows<'a>(state: &'a BoundState, stride: usize) -> impl Iterator<Item = usize> + 'a {
    let n = state.s_grid.len();
    let stride = stride.max(1);
    (0..n).filter(move |&i| i % stride == 0 || i == n - 1)
}

/// Θ against s, with the compactified coordinate z = arctan s alongside.
pub fn theta_vs_s(state: &BoundState, stride: usize) -> String {
    let data: Vec<[f64; 3]> =
        rows(state, stride).map(|i| [state.s_grid[i], state.s_grid[i].atan(), state.theta[i]]).collect();
    csv_table(&["s", "z", "theta"], data.iter().map(|r| r.as_slice()))
}

pub fn rho_vs_s(state: &BoundState, stride: usize) -> String {
    let data: Vec<[f64; 2]> = rows(state, stride).map(|i| [state.s_grid[i], state.density[i]]).collect();
    csv_table(&["s", "rho"], data.iter().map(|r| r.as_slice()))
}

pub fn u_vs_v(state: &BoundState, stride: usize) -> String {
    let data: Vec<[f64; 2]> = rows(state, stride).map(|i| [state.u_samples[i], state.v_samples[i]]).collect();
    csv_table(&["u", "v"], data.iter().map(|r| r.as_slice()))
}

#[derive(Serialize)]
struct StepRecord {
    gamma: f64,
    ground_winding: usize,
    count: usize,
}

pub fn staircase_json(steps: &[StairStep]) -> String {
    let recs: Vec<StepRecord> = steps
        .iter()
        .map(|s| StepRecord { gamma: round_g12(s.gamma), ground_winding: s.ground_winding, count: s.count })
        .collect();
    serde_json::to_string_pretty(&recs).expect("steps serialize") + "\n"
}

#[derive(Serialize)]
struct TableEntry {
    index: usize,
    kind: &'static str,
    gamma_value: f64,
    big_gamma_value: f64,
}

#[derive(Serialize)]
struct TableRecord {
    count: usize,
    method: screened_dirac::roots::RootMethod,
    truncation_order: usize,
    entries: Vec<TableEntry>,
}

pub fn roots_json(t: &RootTables) -> String {
    let entries = (1..=t.count())
        .map(|k| TableEntry {
            index: k,
            kind: if k % 2 == 1 { "critical" } else { "zero" },
            gamma_value: round_g12(t.gamma(k)),
            big_gamma_value: round_g12(t.big_gamma(k)),
        })
        .collect();
    let rec = TableRecord { count: t.count(), method: t.method(), truncation_order: t.truncation_order(), entries };
    serde_json::to_string_pretty(&rec).expect("tables serialize") + "\n"
}
