use std::f64::consts::{FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};
use crate::model::{winding_number, ModelParams, PruferState};
use crate::ode::{integrate, Classification, Direction, IntegratorConfig, Orbit, Terminal, Termination};
use crate::roots::RootTables;

/// Width of the excluded band next to each continuum edge.
pub const CONTINUUM_GAP: f64 = 1e-6;
pub const MIN_TOL: f64 = 1e-12;

/// Beyond this distance the potential is below 1e-18·γ and the flow is autonomous.
fn autonomous_from(gamma: f64) -> f64 {
    45.0 + gamma.max(1.0).ln()
}

/// Θ(0) for winding `n`.
pub fn initial_theta(n: u32) -> f64 {
    PI * (2.0 - n as f64)
}

/// Θ(+∞) of a connector with winding `n` at energy `energy`.
pub fn target_theta(energy: f64, n: u32) -> f64 {
    TAU - energy.acos() - TAU * n as f64
}

/// How far Θ may stray from the target before a departure counts.
///
/// Half the gap to the neighbouring equilibria, so it shrinks near |E| = 1.
pub fn departure_margin(energy: f64) -> f64 {
    let a = energy.acos();
    FRAC_PI_4.min(0.5 * (2.0 * a).min(TAU - 2.0 * a))
}

pub fn shooting_termination(params: &ModelParams, n: u32) -> Termination {
    let target = target_theta(params.energy(), n);
    let start = initial_theta(n);
    Termination {
        theta_target: target,
        window: (target - 3.0 * PI, start.max(target) + 3.0 * PI),
        departure_margin: Some(departure_margin(params.energy())),
        tau_limit: Some(autonomous_from(params.gamma())),
    }
}

fn check_energy(energy: f64) -> Result<()> {
    // Slack so the band edges ±(1 − δ) themselves are accepted.
    if 1.0 - energy.abs() < CONTINUUM_GAP * (1.0 - 1e-9) {
        return Err(Error::EnergyTooCloseToContinuum { energy });
    }
    Ok(())
}

/// Integrate forward from (0, π(2 − n)) and classify against the target.
///
/// Once past the potential the target is a repeller, so an orbit still
/// inside the margin at the horizon is classified by the side it is on.
pub fn shoot(params: &ModelParams, n: u32, config: &IntegratorConfig) -> Result<(Orbit, Classification)> {
    check_energy(params.energy())?;
    let term = shooting_termination(params, n);
    let start = PruferState::new(0.0, initial_theta(n))?;
    let mut orbit = integrate(params, start, Direction::Forward, config, &term)?;
    let d = orbit.final_sample().state.theta - term.theta_target;
    let class = match orbit.terminal() {
        Terminal::Overshoot => Classification::Overshoot,
        Terminal::Undershoot => Classification::Undershoot,
        Terminal::Converged(_) => Classification::Converged,
        Terminal::Truncated if d > 0.0 => Classification::Undershoot,
        Terminal::Truncated if d < 0.0 => Classification::Overshoot,
        Terminal::Truncated => Classification::Converged,
    };
    orbit.set_winding(winding_number(2.0 * initial_theta(n) - term.theta_target, term.theta_target));
    Ok((orbit, class))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub winding: u32,
    pub energy: f64,
    /// Final bracket, undershooting end first.
    pub bracket: (f64, f64),
    /// The eigenvalue sits inside the band excluded next to ±1.
    pub low_confidence: bool,
}

pub fn find_eigenvalue(gamma: f64, n: u32, tol: f64, tables: &RootTables) -> Result<Option<Eigenvalue>> {
    find_eigenvalue_with(gamma, n, tol, tables, &IntegratorConfig::default())
}

/// Bisection on E ∈ [−1 + δ, 1 − δ] between an undershooting and an
/// overshooting orbit. `None` when the tables rule winding `n` out.
pub fn find_eigenvalue_with(
    gamma: f64,
    n: u32,
    tol: f64,
    tables: &RootTables,
    config: &IntegratorConfig,
) -> Result<Option<Eigenvalue>> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::BadParameter(format!("gamma must be > 0, got {gamma}")));
    }
    if !(tol.is_finite() && tol >= MIN_TOL) {
        return Err(Error::BadParameter(format!("tol must be >= {MIN_TOL}, got {tol}")));
    }
    let (j, ground) = tables.interval_indices(gamma)?;
    if (n as usize) < ground || n as usize >= j {
        return Ok(None);
    }
    let classify = |e: f64| -> Result<Classification> {
        let params = ModelParams::new(gamma, e)?;
        Ok(shoot(&params, n, config)?.1)
    };
    let edge = |energy| Eigenvalue { winding: n, energy, bracket: (energy, energy), low_confidence: true };

    let lo = -1.0 + CONTINUUM_GAP;
    let hi = 1.0 - CONTINUUM_GAP;
    use Classification::*;
    match (classify(lo)?, classify(hi)?) {
        (Undershoot, Overshoot) => {}
        (Converged, _) => return Ok(Some(edge(lo))),
        (_, Converged) => return Ok(Some(edge(hi))),
        (Undershoot, Undershoot) => return Ok(Some(edge(hi))),
        (Overshoot, Overshoot) => return Ok(Some(edge(lo))),
        (Overshoot, Undershoot) => {
            return Err(Error::BracketFailure { winding: n, classification: "inverted" });
        }
    }
    let (lo, hi) = bisect(classify, lo, hi, tol)?;
    Ok(Some(Eigenvalue { winding: n, energy: 0.5 * (lo + hi), bracket: (lo, hi), low_confidence: false }))
}

/// Halve an (undershoot, overshoot) bracket until narrower than `2·tol`
/// or until floating point stops it shrinking.
fn bisect<F>(classify: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<Classification>,
{
    while hi - lo >= 2.0 * tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match classify(mid)? {
            Classification::Undershoot => lo = mid,
            Classification::Overshoot => hi = mid,
            Classification::Converged => return Ok((mid, mid)),
        }
    }
    Ok((lo, hi))
}

/// Shrink the bracket of `eig` to a few ulps. Reconstruction wants the
/// orbit to shadow its target as far out as possible.
pub fn polish_eigenvalue(gamma: f64, eig: &Eigenvalue, config: &IntegratorConfig) -> Result<Eigenvalue> {
    if eig.low_confidence {
        return Ok(*eig);
    }
    let classify = |e: f64| -> Result<Classification> {
        let params = ModelParams::new(gamma, e)?;
        Ok(shoot(&params, eig.winding, config)?.1)
    };
    let (lo, hi) = bisect(classify, eig.bracket.0, eig.bracket.1, 0.0)?;
    Ok(Eigenvalue { energy: 0.5 * (lo + hi), bracket: (lo, hi), ..*eig })
}
