//! Tridiagonal matrices whose eigenvalues are reciprocals of the zeros
//! (and critical points) of the regular Coulomb function F_L(η, ·).
//!
//! Expanding F_L(η, ρ)/ρ in the functions F_{L'}(η, ρ)/ρ and applying the
//! three-term recurrence in L turns "ρ is a zero" into "1/ρ is an
//! eigenvalue" of the truncated recurrence matrix.

use super::tridiag::TridiagonalMatrix;
use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 20;

fn check_order(order: usize) -> Result<()> {
    if order < MIN_ORDER {
        return Err(Error::BadParameter(format!("truncation order must be >= {MIN_ORDER}, got {order}")));
    }
    Ok(())
}

fn diagonal_entry(l: f64, eta: f64) -> f64 {
    -eta / (l * (l + 1.0))
}

fn coupling(l: f64, eta: f64) -> f64 {
    ((l + 1.0).powi(2) + eta * eta).sqrt() / ((l + 1.0) * ((2.0 * l + 1.0) * (2.0 * l + 3.0)).sqrt())
}

fn zero_entries(l0: u32, eta: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    let ls: Vec<f64> = (0..order).map(|i| (l0 as usize + 1 + i) as f64).collect();
    let diag = ls.iter().map(|&l| diagonal_entry(l, eta)).collect();
    let off = ls[..order - 1].iter().map(|&l| coupling(l, eta)).collect();
    (diag, off)
}

/// Eigenvalues λ > 0 give the positive zeros ρ = 1/λ of F_L(η, ·).
pub fn ikebe_zero_matrix(l: u32, eta: f64, order: usize) -> Result<TridiagonalMatrix> {
    check_order(order)?;
    let (diag, off) = zero_entries(l, eta, order);
    TridiagonalMatrix::new(diag, off)
}

/// Eigenvalues λ > 0 give the positive critical points ρ = 1/λ of F_L(η, ·).
pub fn ikebe_critical_matrix(l: u32, eta: f64, order: usize) -> Result<TridiagonalMatrix> {
    check_order(order)?;
    let l0 = l as f64 + 1.0;
    let (mut diag, mut off) = zero_entries(l, eta, order - 1);
    diag.insert(0, -eta / (l0 * l0));
    off.insert(0, (l0 * l0 + eta * eta).sqrt() / (l0.powf(1.5) * (2.0 * l0 + 1.0).sqrt()));
    TridiagonalMatrix::new(diag, off)
}
