use super::shooting::{initial_theta, target_theta};
use crate::error::{Error, Result};
use crate::io::csv_table;
use crate::model::{screened_coupling, ModelParams, PruferState};
use crate::ode::{dopri5, integrate, Control, Direction, IntegratorConfig, Orbit, Termination};

/// Spacing of the default reconstruction grid.
pub const GRID_SPACING: f64 = 1e-3;
/// Largest half-width of the default grid.
pub const MAX_HALF_WIDTH: f64 = 1500.0;
const MAX_GRID_POINTS: usize = 1_000_001;
/// Tail mass beyond the grid that still counts as normalizable.
const TAIL_TOL: f64 = 1e-6;
/// Relative height difference below which neighbouring samples form a plateau.
pub const PLATEAU_TOL: f64 = 1e-12;

/// A normalized bound state sampled on a symmetric grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub winding: u32,
    pub energy: f64,
    /// The forward shooting orbit from s = 0.
    pub orbit: Orbit,
    /// Closest approach of the shooting orbit to its target.
    pub cut: f64,
    /// Θ on s ≥ 0, integrated backward from the far target.
    pub tail: Orbit,
    /// Θ(0) of the tail; the centre of the point reflection.
    pub theta_center: f64,
    pub s_grid: Vec<f64>,
    pub theta: Vec<f64>,
    pub density: Vec<f64>,
    pub u_samples: Vec<f64>,
    pub v_samples: Vec<f64>,
    /// |∫ρ − 1| on the grid plus the estimated mass outside it.
    pub normalization_residual: f64,
    pub low_confidence: bool,
}

fn decay_rate(energy: f64) -> f64 {
    (1.0 - energy * energy).max(0.0).sqrt()
}

/// Beyond this the potential is below 1e-18·γ.
fn far_field(gamma: f64) -> f64 {
    45.0 + gamma.max(1.0).ln()
}

fn fine_config() -> IntegratorConfig {
    IntegratorConfig { rel_tol: 1e-12, abs_tol: 1e-12, max_step: 0.05, max_steps: 10_000_000 }
}

/// Θ(s) for s ≥ 0 on the branch that tends to `target`. Integrating toward
/// the origin keeps the repelling end stable.
fn right_half(params: &ModelParams, target: f64, reach: f64) -> Result<Orbit> {
    let mut term = Termination::around(target);
    term.window = (f64::NEG_INFINITY, f64::INFINITY);
    term.tau_limit = Some(reach);
    let start = PruferState::new(reach.atan(), target)?;
    integrate(params, start, Direction::Backward, &fine_config(), &term)
}

fn theta_on(orbit: &Orbit, s: f64, beyond: f64) -> f64 {
    let (lo, hi) = orbit.tau_range();
    let tau = s - orbit.s_of(&orbit.samples()[0]) + lo;
    if tau > hi {
        beyond
    } else {
        orbit.theta_at_tau(tau.max(lo)).unwrap()
    }
}

/// Two-sided Θ(s): the tail for s ≥ 0 and its point reflection about
/// (0, Θ(0)) for s < 0.
fn reflected(tail: &Orbit, center: f64, target: f64, s: f64) -> f64 {
    if s >= 0.0 {
        theta_on(tail, s, target)
    } else {
        2.0 * center - theta_on(tail, -s, target)
    }
}

/// Position where the forward orbit comes closest to its target while
/// nearly stationary.
pub fn closest_approach(orbit: &Orbit, winding: u32, energy: f64) -> Result<f64> {
    let target = target_theta(energy, winding);
    let best = orbit
        .samples()
        .iter()
        .filter(|p| p.tau >= 0.0)
        .min_by(|a, b| (a.state.theta - target).abs().total_cmp(&(b.state.theta - target).abs()))
        .ok_or_else(|| Error::NonNormalizable("empty orbit".into()))?;
    let d = (best.state.theta - target).abs();
    if d > 1e-3 || best.theta_rate.abs() > 1e-2 {
        return Err(Error::NonNormalizable(format!(
            "orbit never settles on its target (closest |dTheta| = {d:.3e}, rate {:.3e})",
            best.theta_rate
        )));
    }
    Ok(orbit.s_of(best))
}

/// Symmetric grid with spacing 1e-3 (coarser only if the point cap is hit)
/// reaching far enough that the density has dropped by 1e-12.
pub fn default_s_grid(cut: f64, energy: f64) -> Vec<f64> {
    let two_k = 2.0 * decay_rate(energy);
    let tail = if two_k > 0.0 { (1e12f64.ln() + (1.0 / two_k).max(1.0).ln()) / two_k } else { MAX_HALF_WIDTH };
    let half = (cut + tail + 1.0).min(MAX_HALF_WIDTH);
    let h = GRID_SPACING.max(2.0 * half / (MAX_GRID_POINTS - 1) as f64);
    let m = (half / h).ceil() as i64;
    (-m..=m).map(|i| i as f64 * h).collect()
}

fn check_grid(s_grid: &[f64]) -> Result<usize> {
    let n = s_grid.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::BadParameter("s grid needs an odd number (>= 3) of points".into()));
    }
    if s_grid.iter().any(|x| !x.is_finite()) || s_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadParameter("s grid must be strictly increasing".into()));
    }
    let scale = s_grid[n - 1].abs();
    for i in 0..n / 2 {
        if (s_grid[i] + s_grid[n - 1 - i]).abs() > 1e-12 * scale.max(1.0) {
            return Err(Error::BadParameter("s grid must be symmetric about 0".into()));
        }
    }
    Ok(n / 2)
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// Strict local maxima, treating runs that differ by less than
/// `PLATEAU_TOL·max` as one level.
pub fn count_crests(values: &[f64]) -> usize {
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let tol = PLATEAU_TOL * peak;
    let mut levels: Vec<f64> = Vec::with_capacity(values.len());
    for &v in values {
        match levels.last() {
            Some(&last) if (v - last).abs() <= tol => {}
            _ => levels.push(v),
        }
    }
    (1..levels.len().saturating_sub(1)).filter(|&i| levels[i] > levels[i - 1] && levels[i] > levels[i + 1]).count()
}

/// Amplitude from R'/R = sin Θ, then u = R cos(Θ/2), v = R sin(Θ/2),
/// normalized so that ∫(u² + v²) ds = 1.
pub fn reconstruct_wavefunction(orbit: &Orbit, params: &ModelParams, s_grid: Option<&[f64]>) -> Result<BoundState> {
    let winding = orbit
        .winding()
        .ok_or_else(|| Error::BadParameter("orbit has no winding number; shoot it first".into()))?
        .value();
    let winding = u32::try_from(winding).map_err(|_| Error::BadParameter(format!("negative winding {winding}")))?;
    let energy = params.energy();
    let cut = closest_approach(orbit, winding, energy)?;
    let owned;
    let s_grid = match s_grid {
        Some(g) => g,
        None => {
            owned = default_s_grid(cut, energy);
            &owned
        }
    };
    let mid = check_grid(s_grid)?;
    let target = target_theta(energy, winding);
    let tail = right_half(params, target, s_grid[s_grid.len() - 1].max(far_field(params.gamma())))?;
    let center = theta_on(&tail, 0.0, target);
    let theta: Vec<f64> = s_grid.iter().map(|&s| reflected(&tail, center, target, s)).collect();

    let n = s_grid.len();
    let mut log_r = vec![0.0; n];
    for i in mid + 1..n {
        let h = s_grid[i] - s_grid[i - 1];
        log_r[i] = log_r[i - 1] + 0.5 * h * (theta[i].sin() + theta[i - 1].sin());
    }
    for i in (0..mid).rev() {
        let h = s_grid[i + 1] - s_grid[i];
        log_r[i] = log_r[i + 1] - 0.5 * h * (theta[i].sin() + theta[i + 1].sin());
    }
    let shift = log_r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut density: Vec<f64> = log_r.iter().map(|l| (2.0 * (l - shift)).exp()).collect();
    let mass = trapezoid(s_grid, &density);
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::NonNormalizable("density integral is not finite".into()));
    }
    density.iter_mut().for_each(|d| *d /= mass);

    let two_k = 2.0 * decay_rate(energy);
    let outside = if two_k > 0.0 { (density[0] + density[n - 1]) / two_k } else { f64::INFINITY };
    if outside > TAIL_TOL {
        return Err(Error::NonNormalizable(format!("tail mass {outside:.3e} beyond |s| = {}", s_grid[n - 1])));
    }
    let residual = (trapezoid(s_grid, &density) - 1.0).abs() + outside;
    let (u_samples, v_samples) = density
        .iter()
        .zip(&theta)
        .map(|(rho, t)| {
            let r = rho.sqrt();
            (r * (0.5 * t).cos(), r * (0.5 * t).sin())
        })
        .unzip();

    Ok(BoundState {
        winding,
        energy,
        orbit: orbit.clone(),
        cut,
        tail,
        theta_center: center,
        s_grid: s_grid.to_vec(),
        theta,
        density,
        u_samples,
        v_samples,
        normalization_residual: residual,
        low_confidence: false,
    })
}

impl BoundState {
    /// Θ at any s, from the same two-sided construction as the samples.
    pub fn theta_at(&self, s: f64) -> f64 {
        reflected(&self.tail, self.theta_center, target_theta(self.energy, self.winding), s)
    }

    /// |Θ(0) − π(2 − N)|: how far the tail misses the shooting start.
    pub fn matching_defect(&self) -> f64 {
        (self.theta_center - initial_theta(self.winding)).abs()
    }

    pub fn crest_count(&self) -> usize {
        count_crests(&self.density)
    }

    pub fn normalization(&self) -> f64 {
        trapezoid(&self.s_grid, &self.density)
    }

    /// Columns s, theta, rho, u, v; every `stride`-th row plus both ends.
    pub fn to_csv(&self, stride: usize) -> String {
        let stride = stride.max(1);
        let n = self.s_grid.len();
        let rows: Vec<[f64; 5]> = (0..n)
            .filter(|&i| i % stride == 0 || i == n - 1)
            .map(|i| [self.s_grid[i], self.theta[i], self.density[i], self.u_samples[i], self.v_samples[i]])
            .collect();
        csv_table(&["s", "theta", "rho", "u", "v"], rows.iter().map(|r| r.as_slice()))
    }
}

/// Integrate u' = (1 + eφ + E) v, v' = (1 − eφ − E) u from `from` to `to`,
/// rescaling every unit of s, and feed each accepted point to `visit`.
fn linear_flow<V: FnMut(f64, f64, f64)>(
    params: &ModelParams,
    from: f64,
    to: f64,
    angle: f64,
    mut visit: V,
) -> Result<()> {
    let cfg = IntegratorConfig { rel_tol: 1e-12, abs_tol: 1e-14, max_step: 0.05, max_steps: 10_000_000 };
    let e = params.energy();
    let p = *params;
    let rhs = move |s: f64, y: &[f64; 2]| {
        let phi = screened_coupling(s, &p);
        [(1.0 + phi + e) * y[1], (1.0 - phi - e) * y[0]]
    };
    let sign = (to - from).signum();
    let mut y = [angle.cos(), angle.sin()];
    let mut s = from;
    while (to - s) * sign > 0.0 {
        let next = if (to - (s + sign)) * sign < 0.0 { to } else { s + sign };
        let mut last = y;
        dopri5(rhs, s, y, sign, Some(next), None, &cfg, |t, y, _| {
            visit(t, y[0], y[1]);
            last = *y;
            Control::Continue
        })?;
        let norm = last[0].hypot(last[1]);
        y = [last[0] / norm, last[1] / norm];
        s = next;
    }
    Ok(())
}

/// Largest |2·arg(u, v) − Θ| over the grid, with (u, v) from direct
/// integration of the linear system. Each half is integrated from its end
/// of the grid toward the origin, the direction in which the bound state
/// dominates.
pub fn prufer_consistency(state: &BoundState, params: &ModelParams) -> Result<f64> {
    let edge = state.s_grid[state.s_grid.len() - 1];
    let mut worst = 0.0f64;
    for from in [-edge, edge] {
        let start = state.theta_at(from);
        let mut unwrapped = 0.5 * start;
        linear_flow(params, from, 0.0, 0.5 * start, |s, u, v| {
            let raw = v.atan2(u);
            let k = ((unwrapped - raw) / std::f64::consts::PI).round();
            unwrapped = raw + k * std::f64::consts::PI;
            worst = worst.max((2.0 * unwrapped - state.theta_at(s)).abs());
        })?;
    }
    Ok(worst)
}

/// Largest |Θ(s) + Θ(−s) − 2Θ(0)| with Θ(0) the shooting start, the left half
/// integrated forward from the far left and the right half taken from the tail.
pub fn reflection_defect(state: &BoundState, params: &ModelParams) -> Result<f64> {
    let start = initial_theta(state.winding);
    let target = target_theta(state.energy, state.winding);
    let (lo, hi) = state.tail.tau_range();
    let reach = hi - lo;
    let mut term = Termination::around(start);
    term.window = (f64::NEG_INFINITY, f64::INFINITY);
    term.tau_limit = Some(reach);
    let left = integrate(
        params,
        PruferState::new(-reach.atan(), 2.0 * start - target)?,
        Direction::Forward,
        &fine_config(),
        &term,
    )?;
    let mut worst = 0.0f64;
    for p in left.samples() {
        let s = left.s_of(p).min(0.0);
        worst = worst.max((p.state.theta + theta_on(&state.tail, -s, target) - 2.0 * start).abs());
    }
    Ok(worst)
}
