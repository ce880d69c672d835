//! Closed-form solutions of the E = ±1 boundary value problems
//! w'' + (1/4 ± 1/r) w = 0 on [0, γ] with w(0) = 1 and either w'(γ) = 0
//! (odd winding) or w(γ) = 0 (even winding).

use num_complex::Complex64;

use super::gamma::{complex_gamma, reciprocal_gamma};
use super::sign::{default_grid, sign_change_roots};
use super::whittaker::{whittaker_m_with_derivative, whittaker_w_with_derivative};
use crate::error::{Error, Result};

/// Denominators smaller than this are treated as sitting on a threshold.
pub const DEGENERATE_TOL: f64 = 1e-10;

/// Left end of the counting grid; W' is log-singular at 0.
pub const COUNT_START: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnergySign {
    /// E = +1
    Plus,
    /// E = −1
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// w'(γ) = 0
    Odd,
    /// w(γ) = 0
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSolution {
    energy_sign: EnergySign,
    parity: Parity,
    gamma: f64,
    kappa: Complex64,
    /// Γ(1 − κ), which makes w(0) = 1.
    scale: Complex64,
    /// Coefficient of M in units of `scale`.
    m_coefficient: Complex64,
}

fn kappa_for(sign: EnergySign) -> Complex64 {
    match sign {
        EnergySign::Plus => Complex64::new(0.0, -1.0),
        EnergySign::Minus => Complex64::new(0.0, 1.0),
    }
}

pub fn barrier_solution(energy_sign: EnergySign, parity: Parity, gamma: f64) -> Result<BarrierSolution> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::BadParameter(format!("gamma must be positive, got {gamma}")));
    }
    let kappa = kappa_for(energy_sign);
    let scale = complex_gamma(1.0 - kappa)?;
    let z = Complex64::new(0.0, gamma);
    let (m, dm) = whittaker_m_with_derivative(kappa, 0.5, z)?;
    let (w, dw) = whittaker_w_with_derivative(kappa, 0.5, z)?;
    let (num, den) = match parity {
        Parity::Odd => (dw, dm),
        Parity::Even => (w, m),
    };
    if den.norm() <= DEGENERATE_TOL {
        return Err(Error::DegenerateThreshold { gamma });
    }
    Ok(BarrierSolution { energy_sign, parity, gamma, kappa, scale, m_coefficient: -num / den })
}

impl BarrierSolution {
    pub fn energy_sign(&self) -> EnergySign {
        self.energy_sign
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The assembled complex combination and its r-derivative at r > 0.
    pub fn evaluate_complex(&self, r: f64) -> Result<(Complex64, Complex64)> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::BadParameter(format!("r must be >= 0, got {r}")));
        }
        let i = Complex64::new(0.0, 1.0);
        if r == 0.0 {
            let w0 = self.scale * reciprocal_gamma(1.0 - self.kappa);
            return Err(Error::DomainError(format!("derivative is log-singular at r = 0 (w(0) = {w0})")));
        }
        let z = Complex64::new(0.0, r);
        let (m, dm) = whittaker_m_with_derivative(self.kappa, 0.5, z)?;
        let (w, dw) = whittaker_w_with_derivative(self.kappa, 0.5, z)?;
        let value = self.scale * (self.m_coefficient * m + w);
        let deriv = self.scale * (self.m_coefficient * dm + dw) * i;
        Ok((value, deriv))
    }

    /// Real part of w(r); w(0) = 1.
    pub fn value(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok((self.scale * reciprocal_gamma(1.0 - self.kappa)).re);
        }
        self.evaluate_complex(r).map(|(v, _)| v.re)
    }

    /// Real part of dw/dr for r > 0.
    pub fn derivative(&self, r: f64) -> Result<f64> {
        self.evaluate_complex(r).map(|(_, d)| d.re)
    }

    fn count(&self, use_derivative: bool, boundary_zero: bool) -> Result<usize> {
        let g = self.gamma;
        let f = |r: f64| {
            if boundary_zero && r == g {
                return 0.0;
            }
            let v = if use_derivative { self.derivative(r) } else { self.value(r) };
            v.unwrap_or(f64::NAN)
        };
        let a = COUNT_START.min(0.5 * g);
        Ok(sign_change_roots(&f, a, g, default_grid(a, g)).len())
    }

    /// Critical points of w on (0, γ]; the boundary condition's zero of w'
    /// at γ counts for odd parity.
    pub fn critical_point_count(&self) -> Result<usize> {
        self.count(true, self.parity == Parity::Odd)
    }

    /// Roots of w on (0, γ]; the boundary condition's root at γ counts for
    /// even parity.
    pub fn root_count(&self) -> Result<usize> {
        self.count(false, self.parity == Parity::Even)
    }
}
