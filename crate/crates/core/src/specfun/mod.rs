//! Special functions for the E = ±1 barrier problems.

mod barrier;
mod coulomb;
mod gamma;
mod series;
mod sign;
mod whittaker;

pub use barrier::{barrier_solution, BarrierSolution, EnergySign, Parity, COUNT_START, DEGENERATE_TOL};
pub use coulomb::{coulomb_f, coulomb_normalization};
pub use gamma::{complex_gamma, digamma, reciprocal_gamma, EULER_GAMMA};
pub use series::{kummer_m, kummer_m_with_derivative, kummer_u_log_series, MAX_TERMS};
pub(crate) use sign::refine;
pub use sign::{count_sign_changes, default_grid, sign_change_roots, sign_change_roots_with, ROOT_TOL};
pub use whittaker::{whittaker_m, whittaker_m_with_derivative, whittaker_w, whittaker_w_with_derivative};

pub use num_complex::Complex64 as ComplexValue;
