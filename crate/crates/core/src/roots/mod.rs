//! Threshold sequences γ_k (E = +1) and Γ_k (E = −1).
//!
//! Odd-indexed entries are critical points and even-indexed entries are zeros
//! of −i·M_{∓i,1/2}(ir).

mod ikebe;
mod tables;
mod tridiag;

pub use ikebe::{ikebe_critical_matrix, ikebe_zero_matrix, MIN_ORDER};
pub use tables::{
    bisection_roots, build_root_tables, build_root_tables_with, threshold_function, Family, RootMethod, RootTables,
    CROSS_CHECK_TOL, DEFAULT_ORDER,
};
pub use tridiag::{symmetric_tridiagonal_eigenvalues, TridiagonalMatrix};
