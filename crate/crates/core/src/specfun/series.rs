//! Kummer series summed in extended precision.
//!
//! On the imaginary axis the terms of M(a, b, ir) peak near e^r before
//! cancelling down to O(1), so the partial sums are carried with enough
//! binary digits to absorb that growth and rounded to f64 at the end.

use std::ops::{Add, Mul, Sub};

use dashu_float::FBig;
use num_complex::Complex64;

use super::gamma::{digamma, reciprocal_gamma, EULER_GAMMA};
use crate::error::{Error, Result};

pub const MAX_TERMS: usize = 10_000;
const REL_TOL: f64 = 1e-16;

fn working_precision(a: Complex64, b: Complex64, z: Complex64) -> usize {
    let growth = z.norm() + (a.norm() + b.norm()).ln_1p();
    96 + (growth * std::f64::consts::LOG2_E).ceil() as usize
}

#[derive(Clone, Debug)]
struct XC {
    re: FBig,
    im: FBig,
}

fn real(x: f64, prec: usize) -> FBig {
    FBig::try_from(x).expect("finite input").with_precision(prec).value()
}

impl XC {
    fn new(c: Complex64, prec: usize) -> Self {
        Self { re: real(c.re, prec), im: real(c.im, prec) }
    }

    fn zero(prec: usize) -> Self {
        Self::new(Complex64::new(0.0, 0.0), prec)
    }

    fn div_real(&self, k: &FBig) -> Self {
        Self { re: &self.re / k, im: &self.im / k }
    }

    fn recip(&self) -> Self {
        let n = &self.re * &self.re + &self.im * &self.im;
        Self { re: &self.re / &n, im: -(&self.im / &n) }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Add<&XC> for &XC {
    type Output = XC;
    fn add(self, o: &XC) -> XC {
        XC { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub<&XC> for &XC {
    type Output = XC;
    fn sub(self, o: &XC) -> XC {
        XC { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul<&XC> for &XC {
    type Output = XC;
    fn mul(self, o: &XC) -> XC {
        XC { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

fn near_nonpositive_integer(b: Complex64) -> bool {
    b.im.abs() < 1e-12 && b.re < 0.5 && (b.re - b.re.round()).abs() < 1e-12
}

/// Kummer M(a, b, z) and dM/dz.
pub fn kummer_m_with_derivative(a: Complex64, b: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
    if near_nonpositive_integer(b) {
        return Err(Error::BadParameter(format!("b = {b} is a non-positive integer")));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::BadParameter("non-finite argument".into()));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok((Complex64::new(1.0, 0.0), a / b));
    }
    let prec = working_precision(a, b, z);
    let xa = XC::new(a, prec);
    let xb = XC::new(b, prec);
    let xz = XC::new(z, prec);
    let one = real(1.0, prec);

    let mut term = XC::new(Complex64::new(1.0, 0.0), prec);
    let mut sum = term.clone();
    let mut dsum = XC::zero(prec);
    let mut k = 0usize;
    let mut kf = real(0.0, prec);
    while k < MAX_TERMS {
        // Derivative term k+1 is term_k (a+k)/(b+k); the next series term
        // multiplies that by z/(k+1).
        let ak = &xa + &XC { re: kf.clone(), im: real(0.0, prec) };
        let bk = &xb + &XC { re: kf.clone(), im: real(0.0, prec) };
        let dterm = &(&term * &ak) * &bk.recip();
        kf = &kf + &one;
        term = (&dterm * &xz).div_real(&kf);
        dsum = &dsum + &dterm;
        sum = &sum + &term;
        k += 1;

        let (t, s) = (term.magnitude(), sum.magnitude());
        let (dt, ds) = (dterm.magnitude(), dsum.magnitude());
        let ratio = (a + k as f64).norm() * z.norm() / ((b + k as f64).norm() * (k + 1) as f64);
        let settled = t <= REL_TOL * s && dt <= REL_TOL * ds;
        if (settled && ratio < 0.5) || (t == 0.0 && dt == 0.0) {
            return Ok((sum.to_c64(), dsum.to_c64()));
        }
    }
    Err(Error::NonConvergence { what: "Kummer M series", iterations: MAX_TERMS })
}

pub fn kummer_m(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    kummer_m_with_derivative(a, b, z).map(|(m, _)| m)
}

/// Pieces of the logarithmic expansion of U(a, 2, z):
/// S0 = Σ c_k z^k, S1 = Σ c_k d_k z^k and their z-derivatives, where
/// c_k = (a)_k / ((2)_k k!) and d_k = Σ_{m<k} 1/(a+m) − H_k − H_{k+1}.
pub(crate) struct LogSeries {
    pub s0: Complex64,
    pub ds0: Complex64,
    pub s1: Complex64,
    pub ds1: Complex64,
}

pub(crate) fn u_log_series_parts(a: Complex64, z: Complex64) -> Result<LogSeries> {
    let b = Complex64::new(2.0, 0.0);
    let prec = working_precision(a, b, z);
    let xa = XC::new(a, prec);
    let xz = XC::new(z, prec);
    let one = real(1.0, prec);
    let zero = real(0.0, prec);

    let mut term = XC::new(Complex64::new(1.0, 0.0), prec);
    let mut d = XC::new(Complex64::new(-1.0, 0.0), prec);
    let mut s0 = term.clone();
    let mut s1 = &term * &d;
    let mut ds0 = XC::zero(prec);
    let mut ds1 = XC::zero(prec);
    let mut kf = zero.clone();
    for k in 0..MAX_TERMS {
        let ak = &xa + &XC { re: kf.clone(), im: zero.clone() };
        let k1 = &kf + &one;
        let k2 = &k1 + &one;
        // d_{k+1} = d_k + 1/(a+k) − 1/(k+1) − 1/(k+2)
        let harmonic = XC { re: &one / &k1 + &one / &k2, im: zero.clone() };
        d = &(&d + &ak.recip()) - &harmonic;
        let dterm = (&term * &ak).div_real(&k2);
        term = (&dterm * &xz).div_real(&k1);
        kf = k1;
        ds0 = &ds0 + &dterm;
        ds1 = &ds1 + &(&dterm * &d);
        s0 = &s0 + &term;
        let td = &term * &d;
        s1 = &s1 + &td;

        let kk = (k + 1) as f64;
        let ratio = (a + kk).norm() * z.norm() / ((2.0 + kk) * (kk + 1.0));
        let small = |t: &XC, s: &XC| t.magnitude() <= REL_TOL * s.magnitude();
        let settled = small(&term, &s0) && small(&td, &s1) && small(&dterm, &ds0);
        if (settled && ratio < 0.5) || term.magnitude() == 0.0 {
            return Ok(LogSeries { s0: s0.to_c64(), ds0: ds0.to_c64(), s1: s1.to_c64(), ds1: ds1.to_c64() });
        }
    }
    Err(Error::NonConvergence { what: "Kummer U series", iterations: MAX_TERMS })
}

fn check_u_args(a: Complex64, n_plus_1: u32, z: Complex64) -> Result<()> {
    if n_plus_1 != 2 {
        return Err(Error::BadParameter(format!("only b = 2 is supported, got {n_plus_1}")));
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::DomainError("U(a, 2, z) is singular at z = 0".into()));
    }
    if near_nonpositive_integer(a) {
        return Err(Error::BadParameter(format!("a = {a} is a non-positive integer")));
    }
    Ok(())
}

/// Constant part ψ(a) + 2γ of the logarithmic coefficient.
fn log_constant(a: Complex64) -> Result<Complex64> {
    Ok(digamma(a)? + 2.0 * EULER_GAMMA)
}

/// Tricomi U(a, n+1, z) for n+1 = 2 from its logarithmic expansion.
pub fn kummer_u_log_series(a: Complex64, n_plus_1: u32, z: Complex64) -> Result<Complex64> {
    check_u_args(a, n_plus_1, z)?;
    let parts = u_log_series_parts(a, z)?;
    let l = z.ln() + log_constant(a)?;
    Ok(reciprocal_gamma(a - 1.0) * (l * parts.s0 + parts.s1) + reciprocal_gamma(a) / z)
}

/// z·U(a, 2, z) and its z-derivative, written so that nothing cancels at small z.
pub(crate) fn z_times_u_with_derivative(a: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
    check_u_args(a, 2, z)?;
    let p = u_log_series_parts(a, z)?;
    let l = z.ln() + log_constant(a)?;
    let big_p = l * p.s0 + p.s1;
    let rg1 = reciprocal_gamma(a - 1.0);
    let value = rg1 * z * big_p + reciprocal_gamma(a);
    let deriv = rg1 * (big_p + p.s0 + z * (l * p.ds0 + p.ds1));
    Ok((value, deriv))
}
