use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::complex_gamma;
use super::whittaker::whittaker_m;
use crate::error::{Error, Result};

/// Normalization C_L(η) = 2^L e^{−πη/2} |Γ(L+1+iη)| / (2L+1)!.
pub fn coulomb_normalization(l: u32, eta: f64) -> Result<f64> {
    let g = complex_gamma(Complex64::new(l as f64 + 1.0, eta))?.norm();
    let fact: f64 = (1..=2 * l + 1).map(f64::from).product();
    Ok(2f64.powi(l as i32) * (-0.5 * PI * eta).exp() * g / fact)
}

/// Regular Coulomb wave function F_L(η, ρ) through
/// F_L = C_L(η) 2^{−L−1} (−i)^{L+1} M_{iη, L+1/2}(2iρ).
pub fn coulomb_f(l: u32, eta: f64, rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho < 0.0 {
        return Err(Error::BadParameter(format!("rho must be >= 0, got {rho}")));
    }
    let m = whittaker_m(Complex64::new(0.0, eta), l as f64 + 0.5, Complex64::new(0.0, 2.0 * rho))?;
    let phase = Complex64::new(0.0, -1.0).powu(l + 1);
    let c = coulomb_normalization(l, eta)? * 2f64.powi(-(l as i32) - 1);
    Ok(c * (phase * m).re)
}
