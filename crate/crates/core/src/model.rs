//! Physical parameters and the compactified (z, Θ) flow.
//!
//! With s the position, z = arctan s and Θ = 2θ the doubled Prüfer angle,
//! the flow on the cylinder [−π/2, π/2] × ℝ reads
//!
//! ```text
//! ż = cos² z
//! Θ̇ = 2 cos Θ − γ exp(−|tan z|) − 2E
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

/// Below this distance from ±π/2 the potential term is taken as its limit 0.
pub const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    gamma: f64,
    energy: f64,
    mass: f64,
    screening_length: f64,
}

impl ModelParams {
    /// Coupling `gamma` and trial energy in units of the rest mass.
    ///
    /// `gamma = 0` is accepted so the free flow can be integrated; the
    /// spectral routines require a strictly positive coupling.
    pub fn new(gamma: f64, energy: f64) -> Result<Self> {
        Self::with_units(gamma, energy, 1.0, 1.0)
    }

    /// Only `mass == 1` and `screening_length == 1` are supported.
    pub fn with_units(gamma: f64, energy: f64, mass: f64, screening_length: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::BadParameter(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        if !energy.is_finite() {
            return Err(Error::BadParameter(format!("energy must be finite, got {energy}")));
        }
        if mass != 1.0 || screening_length != 1.0 {
            return Err(Error::BadParameter(format!(
                "mass and screening length are fixed to 1, got {mass} and {screening_length}"
            )));
        }
        Ok(Self { gamma, energy, mass, screening_length })
    }

    pub fn with_energy(self, energy: f64) -> Result<Self> {
        Self::new(self.gamma, energy)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn screening_length(&self) -> f64 {
        self.screening_length
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruferState {
    pub z: f64,
    /// Unwrapped doubled angle.
    pub theta: f64,
}

impl PruferState {
    pub fn new(z: f64, theta: f64) -> Result<Self> {
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&z) || !theta.is_finite() {
            return Err(Error::BadParameter(format!("state ({z}, {theta}) outside the cylinder")));
        }
        Ok(Self { z, theta })
    }
}

/// eφ(s) = (γ/2) e^{−|s|}.
pub fn screened_coupling(s: f64, params: &ModelParams) -> f64 {
    0.5 * params.gamma * (-s.abs()).exp()
}

fn potential_term(z: f64, gamma: f64) -> f64 {
    if z.abs() >= FRAC_PI_2 - BOUNDARY_EPS {
        0.0
    } else {
        gamma * (-z.tan().abs()).exp()
    }
}

pub fn theta_rhs(state: &PruferState, params: &ModelParams) -> f64 {
    2.0 * state.theta.cos() - potential_term(state.z, params.gamma) - 2.0 * params.energy
}

/// Same right-hand side written in terms of s = tan z, which avoids the
/// round trip through tan near the ends of the cylinder.
pub fn theta_rhs_at_s(s: f64, theta: f64, params: &ModelParams) -> f64 {
    2.0 * theta.cos() - params.gamma * (-s.abs()).exp() - 2.0 * params.energy
}

pub fn z_rhs(state: &PruferState) -> f64 {
    let c = state.z.cos();
    if state.z.abs() >= FRAC_PI_2 {
        0.0
    } else {
        c * c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquilibriumKind {
    SMinus,
    SPlus,
    NMinus,
    NPlus,
    CMinus,
    CPlus,
    DMinus,
    DPlus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub kind: EquilibriumKind,
    pub location: PruferState,
    /// ∂Θ̇/∂Θ at the point; the z-direction is degenerate.
    pub tangential_eigenvalue: f64,
}

/// Equilibria in the fundamental domain Θ ∈ (−π, π].
pub fn equilibria(energy: f64) -> Result<Vec<EquilibriumPoint>> {
    if !energy.is_finite() || energy.abs() > 1.0 {
        return Err(Error::NoEquilibria { energy });
    }
    let point = |kind, z, theta: f64| EquilibriumPoint {
        kind,
        location: PruferState { z, theta },
        tangential_eigenvalue: if energy.abs() == 1.0 { 0.0 } else { -2.0 * theta.sin() },
    };
    use EquilibriumKind::*;
    let points = if energy == 1.0 {
        vec![point(DMinus, -FRAC_PI_2, 0.0), point(DPlus, FRAC_PI_2, 0.0)]
    } else if energy == -1.0 {
        vec![point(CMinus, -FRAC_PI_2, PI), point(CPlus, FRAC_PI_2, PI)]
    } else {
        let a = energy.acos();
        vec![
            point(SMinus, -FRAC_PI_2, a),
            point(SPlus, FRAC_PI_2, -a),
            point(NMinus, -FRAC_PI_2, -a),
            point(NPlus, FRAC_PI_2, a),
        ]
    };
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindingNumber(pub i64);

impl WindingNumber {
    pub fn value(self) -> i64 {
        self.0
    }
}

pub fn winding_number(theta_at_minus_inf: f64, theta_at_plus_inf: f64) -> WindingNumber {
    WindingNumber(((theta_at_minus_inf - theta_at_plus_inf) / TAU).floor() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64, energy: f64) -> ModelParams {
        ModelParams::new(gamma, energy).unwrap()
    }

    #[test]
    fn coupling_values() {
        assert_eq!(screened_coupling(0.0, &params(2.0, 0.0)), 1.0);
        assert_eq!(screened_coupling(0.0, &params(0.5, 0.0)), 0.25);
        assert!(screened_coupling(800.0, &params(3.0, 0.0)) < 1e-300);
    }

    #[test]
    fn rhs_examples() {
        let s = |z, t| PruferState::new(z, t).unwrap();
        assert_eq!(theta_rhs(&s(0.0, 0.0), &params(0.0, 1.0)), 0.0);
        assert_eq!(theta_rhs(&s(0.0, FRAC_PI_2), &params(2.0, 0.0)), -2.0 + 2.0 * FRAC_PI_2.cos());
        let e: f64 = 0.3;
        assert!(theta_rhs(&s(FRAC_PI_2, e.acos()), &params(5.0, e)).abs() < 1e-15);
        assert_eq!(z_rhs(&s(0.0, 1.0)), 1.0);
        assert_eq!(z_rhs(&s(FRAC_PI_2, 1.0)), 0.0);
        assert!((z_rhs(&s(std::f64::consts::FRAC_PI_4, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_other_units() {
        assert!(ModelParams::with_units(1.0, 0.0, 2.0, 1.0).is_err());
        assert!(ModelParams::with_units(1.0, 0.0, 1.0, 0.5).is_err());
        assert!(ModelParams::new(-1.0, 0.0).is_err());
        assert!(PruferState::new(2.0, 0.0).is_err());
    }

    #[test]
    fn equilibria_at_zero_energy() {
        let pts = equilibria(0.0).unwrap();
        let find = |k| pts.iter().find(|p| p.kind == k).unwrap().location;
        assert_eq!(find(EquilibriumKind::SMinus), PruferState { z: -FRAC_PI_2, theta: FRAC_PI_2 });
        assert_eq!(find(EquilibriumKind::SPlus), PruferState { z: FRAC_PI_2, theta: -FRAC_PI_2 });
        assert_eq!(find(EquilibriumKind::NMinus), PruferState { z: -FRAC_PI_2, theta: -FRAC_PI_2 });
        assert_eq!(find(EquilibriumKind::NPlus), PruferState { z: FRAC_PI_2, theta: FRAC_PI_2 });
    }

    #[test]
    fn degenerate_equilibria() {
        let d = equilibria(1.0).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|p| p.location.theta == 0.0 && p.tangential_eigenvalue == 0.0));
        let c = equilibria(-1.0).unwrap();
        assert!(c.iter().all(|p| p.location.theta == PI));
        assert_eq!(equilibria(1.5), Err(Error::NoEquilibria { energy: 1.5 }));
    }

    #[test]
    fn tangential_eigenvalues_match_jacobian() {
        let e: f64 = -0.4;
        let k = 2.0 * (1.0 - e * e).sqrt();
        for p in equilibria(e).unwrap() {
            let h = 1e-6;
            let pr = params(1.0, e);
            let up = PruferState { theta: p.location.theta + h, ..p.location };
            let dn = PruferState { theta: p.location.theta - h, ..p.location };
            let fd = (theta_rhs(&up, &pr) - theta_rhs(&dn, &pr)) / (2.0 * h);
            assert!((fd - p.tangential_eigenvalue).abs() < 1e-8);
            assert!((p.tangential_eigenvalue.abs() - k).abs() < 1e-14);
        }
    }

    #[test]
    fn winding_examples() {
        assert_eq!(winding_number(TAU, 0.0), WindingNumber(1));
        assert_eq!(winding_number(3.0 * PI, 5.0 * PI), WindingNumber(-1));
        let e: f64 = 0.2;
        for n in 0..5 {
            let a = e.acos();
            let w = winding_number(TAU + a, TAU - a - TAU * n as f64);
            assert_eq!(w.value(), n);
        }
    }
}
