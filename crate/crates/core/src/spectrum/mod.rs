//! Bound states by shooting, counted and labelled by the threshold tables.

mod enumerate;
mod shooting;
mod wavefunction;

pub use enumerate::{
    bound_state, energy_curve, energy_curve_csv, enumerate_bound_states, enumerate_bound_states_with, stair_step,
    staircase, staircase_csv, staircase_with, CurvePoint, SpectrumRecord, SpectrumSummary, StairStep, StateRecord,
    THRESHOLD_GUARD,
};
pub use shooting::{
    departure_margin, find_eigenvalue, find_eigenvalue_with, initial_theta, polish_eigenvalue, shoot,
    shooting_termination, target_theta, Eigenvalue, CONTINUUM_GAP, MIN_TOL,
};
pub use wavefunction::{
    closest_approach, count_crests, default_s_grid, prufer_consistency, reconstruct_wavefunction, reflection_defect,
    trapezoid, BoundState, GRID_SPACING, MAX_HALF_WIDTH, PLATEAU_TOL,
};
