use num_complex::Complex64;

use super::series::{kummer_m_with_derivative, z_times_u_with_derivative};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// z^p on the principal branch, exact for small integer powers.
fn principal_pow(z: Complex64, p: f64) -> Result<Complex64> {
    if z == ZERO {
        return if p > 0.0 {
            Ok(ZERO)
        } else if p == 0.0 {
            Ok(Complex64::new(1.0, 0.0))
        } else {
            Err(Error::DomainError(format!("z^{p} is singular at z = 0")))
        };
    }
    if p == p.round() && p.abs() < 64.0 {
        Ok(z.powi(p as i32))
    } else {
        Ok(z.powf(p))
    }
}

fn check_mu(mu: f64) -> Result<()> {
    let two_mu = 2.0 * mu;
    if !mu.is_finite() || (two_mu < 0.0 && two_mu == two_mu.round()) {
        return Err(Error::BadParameter(format!("2 mu = {two_mu} is a negative integer")));
    }
    Ok(())
}

/// Whittaker M_{κ,μ}(z) and its derivative with respect to z.
pub fn whittaker_m_with_derivative(kappa: Complex64, mu: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_mu(mu)?;
    let p = 0.5 + mu;
    let a = Complex64::new(p, 0.0) - kappa;
    let b = Complex64::new(1.0 + 2.0 * mu, 0.0);
    let (m, dm) = kummer_m_with_derivative(a, b, z)?;
    let e = (-0.5 * z).exp();
    let value = e * principal_pow(z, p)? * m;
    // d/dz [e^{−z/2} z^p M] = e^{−z/2} z^{p−1} [(p − z/2) M + z M']
    let deriv = e * principal_pow(z, p - 1.0)? * ((p - 0.5 * z) * m + z * dm);
    Ok((value, deriv))
}

pub fn whittaker_m(kappa: Complex64, mu: f64, z: Complex64) -> Result<Complex64> {
    whittaker_m_with_derivative(kappa, mu, z).map(|(m, _)| m)
}

/// Whittaker W_{κ,1/2}(z) and its derivative with respect to z.
pub fn whittaker_w_with_derivative(kappa: Complex64, mu: f64, z: Complex64) -> Result<(Complex64, Complex64)> {
    if mu != 0.5 {
        return Err(Error::BadParameter(format!("W is implemented for mu = 1/2 only, got {mu}")));
    }
    if z == ZERO {
        return Err(Error::DomainError("W has a logarithmic branch point at z = 0".into()));
    }
    let a = Complex64::new(1.0, 0.0) - kappa;
    let (zu, dzu) = z_times_u_with_derivative(a, z)?;
    let e = (-0.5 * z).exp();
    Ok((e * zu, e * (dzu - 0.5 * zu)))
}

pub fn whittaker_w(kappa: Complex64, mu: f64, z: Complex64) -> Result<Complex64> {
    whittaker_w_with_derivative(kappa, mu, z).map(|(w, _)| w)
}
