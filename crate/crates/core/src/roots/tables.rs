use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ikebe::{ikebe_critical_matrix, ikebe_zero_matrix};
use super::tridiag::symmetric_tridiagonal_eigenvalues;
use crate::error::{Error, Result};
use crate::io::format_g12;
use crate::par::{self, Execution};
use crate::specfun::{default_grid, refine, sign_change_roots_with, whittaker_m_with_derivative};

pub const DEFAULT_ORDER: usize = 400;
pub const CROSS_CHECK_TOL: f64 = 1e-6;
/// Left end of the scans, clear of the trivial zero at r = 0.
const SCAN_START: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    Ikebe,
    Bisection,
}

/// The two threshold families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Zeros and critical points of M_{−i,1/2}(ir), the E = +1 thresholds γ_k.
    Upper,
    /// Zeros and critical points of M_{i,1/2}(ir), the E = −1 thresholds Γ_k.
    Lower,
}

impl Family {
    fn kappa(self) -> Complex64 {
        match self {
            Family::Upper => Complex64::new(0.0, -1.0),
            Family::Lower => Complex64::new(0.0, 1.0),
        }
    }

    /// Coulomb parameter η with M_{iη,1/2}.
    fn eta(self) -> f64 {
        self.kappa().im
    }

    fn name(self) -> &'static str {
        match self {
            Family::Upper => "gamma",
            Family::Lower => "big_gamma",
        }
    }
}

/// y(r) = −i M_{κ,1/2}(ir), which is real, and dy/dr.
pub fn threshold_function(family: Family, r: f64) -> Result<(f64, f64)> {
    let (m, dm) = whittaker_m_with_derivative(family.kappa(), 0.5, Complex64::new(0.0, r))?;
    let minus_i = Complex64::new(0.0, -1.0);
    // d/dr = i d/dz
    Ok(((minus_i * m).re, dm.re))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootTables {
    gamma_seq: Vec<f64>,
    big_gamma_seq: Vec<f64>,
    count: usize,
    method: RootMethod,
    truncation_order: usize,
}

/// Interleave critical points (odd positions) and zeros (even positions).
fn interleave(crit: &[f64], zeros: &[f64], count: usize) -> Vec<f64> {
    (0..count).map(|k| if k % 2 == 0 { crit[k / 2] } else { zeros[k / 2] }).collect()
}

impl RootTables {
    pub fn from_sequences(
        gamma_seq: Vec<f64>,
        big_gamma_seq: Vec<f64>,
        method: RootMethod,
        truncation_order: usize,
    ) -> Result<Self> {
        let count = gamma_seq.len();
        if count == 0 || big_gamma_seq.len() != count {
            return Err(Error::BadParameter("tables need equal, non-zero lengths".into()));
        }
        for seq in [&gamma_seq, &big_gamma_seq] {
            let mut prev = 0.0;
            for &x in seq.iter() {
                if x <= prev || !x.is_finite() {
                    return Err(Error::BadParameter("table entries must be positive and increasing".into()));
                }
                prev = x;
            }
        }
        Ok(Self { gamma_seq, big_gamma_seq, count, method, truncation_order })
    }

    pub fn gamma_seq(&self) -> &[f64] {
        &self.gamma_seq
    }

    pub fn big_gamma_seq(&self) -> &[f64] {
        &self.big_gamma_seq
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn method(&self) -> RootMethod {
        self.method
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    /// γ_k with γ_0 = 0.
    pub fn gamma(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.gamma_seq[k - 1]
        }
    }

    /// Γ_k with Γ_0 = 0.
    pub fn big_gamma(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.big_gamma_seq[k - 1]
        }
    }

    /// Largest coupling the tables can classify.
    pub fn coverage(&self) -> f64 {
        self.gamma_seq[self.count - 1].min(self.big_gamma_seq[self.count - 1])
    }

    /// (j, n) with γ ∈ [γ_{j−1}, γ_j) and γ ∈ [Γ_n, Γ_{n+1}).
    pub fn interval_indices(&self, gamma: f64) -> Result<(usize, usize)> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::BadParameter(format!("gamma must be >= 0, got {gamma}")));
        }
        if gamma >= self.coverage() {
            return Err(Error::TableTooShort { gamma, limit: self.coverage() });
        }
        let j = self.gamma_seq.partition_point(|&g| g <= gamma) + 1;
        let n = self.big_gamma_seq.partition_point(|&g| g <= gamma);
        Ok((j, n))
    }

    /// Distance from `gamma` to the nearest table entry of either family.
    pub fn nearest_entry(&self, gamma: f64) -> f64 {
        self.gamma_seq
            .iter()
            .chain(&self.big_gamma_seq)
            .copied()
            .min_by(|a, b| (a - gamma).abs().total_cmp(&(b - gamma).abs()))
            .unwrap()
    }

    /// Columns: index, kind, gamma_value, big_gamma_value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,kind,gamma_value,big_gamma_value\n");
        for k in 0..self.count {
            let kind = if k % 2 == 0 { "critical" } else { "zero" };
            out.push_str(&format!(
                "{},{},{},{}\n",
                k + 1,
                kind,
                format_g12(self.gamma_seq[k]),
                format_g12(self.big_gamma_seq[k])
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: RootTables =
            serde_json::from_str(text).map_err(|e| Error::BadParameter(format!("bad table json: {e}")))?;
        Self::from_sequences(t.gamma_seq, t.big_gamma_seq, t.method, t.truncation_order)
    }
}

/// Reciprocals of the positive eigenvalues, ascending, mapped to r = 2ρ.
fn positive_roots(eigenvalues: &[f64], wanted: usize) -> Vec<f64> {
    let mut rs: Vec<f64> = eigenvalues.iter().filter(|&&l| l > 0.0).map(|l| 2.0 / l).collect();
    rs.sort_by(f64::total_cmp);
    rs.truncate(wanted);
    rs
}

fn ikebe_family(family: Family, crit: usize, zeros: usize, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let eta = family.eta();
    let c = positive_roots(&symmetric_tridiagonal_eigenvalues(&ikebe_critical_matrix(0, eta, order)?)?, crit);
    let z = positive_roots(&symmetric_tridiagonal_eigenvalues(&ikebe_zero_matrix(0, eta, order)?)?, zeros);
    if c.len() < crit || z.len() < zeros {
        return Err(Error::CountMismatch { expected: crit.max(zeros), found: c.len().min(z.len()) });
    }
    Ok((c, z))
}

/// Zeros of y and of y' on [SCAN_START, hi], from one shared grid.
fn scan_family(exec: Execution, family: Family, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = default_grid(SCAN_START, hi);
    let h = (hi - SCAN_START) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| SCAN_START + h * i as f64).collect();
    let vals = par::map(exec, &xs, |&r| threshold_function(family, r));
    let vals: Vec<(f64, f64)> = vals.into_iter().collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for i in 0..n - 1 {
        if vals[i].1.signum() != vals[i + 1].1.signum() {
            jobs.push((i, true));
        }
        if vals[i].0.signum() != vals[i + 1].0.signum() {
            jobs.push((i, false));
        }
    }
    let refined = par::map(exec, &jobs, |&(i, deriv)| {
        let f = |r: f64| {
            let (v, d) = threshold_function(family, r).unwrap_or((f64::NAN, f64::NAN));
            if deriv {
                d
            } else {
                v
            }
        };
        let f0 = if deriv { vals[i].1 } else { vals[i].0 };
        (deriv, refine(&f, xs[i], xs[i + 1], f0))
    });
    let crit = refined.iter().filter(|r| r.0).map(|r| r.1).collect();
    let zeros = refined.iter().filter(|r| !r.0).map(|r| r.1).collect();
    Ok((crit, zeros))
}

fn bisection_family(exec: Execution, family: Family, crit: usize, zeros: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    // Roots are spaced by more than one unit; grow the window until enough show up.
    let mut hi = 4.0 * (crit.max(zeros) as f64) + 4.0;
    loop {
        let (c, z) = scan_family(exec, family, hi)?;
        if c.len() > crit && z.len() > zeros {
            return Ok((c[..crit].to_vec(), z[..zeros].to_vec()));
        }
        hi *= 1.5;
    }
}

fn cross_check(exec: Execution, family: Family, crit: &[f64], zeros: &[f64]) -> Result<()> {
    let hi = crit.last().copied().unwrap_or(0.0).max(zeros.last().copied().unwrap_or(0.0)) + 0.5;
    let (bc, bz) = scan_family(exec, family, hi)?;
    for (found, expected) in [(&bc, crit), (&bz, zeros)] {
        if found.len() != expected.len() {
            return Err(Error::CountMismatch { expected: expected.len(), found: found.len() });
        }
    }
    // Index in the interleaved table: critical points sit at 1, 3, 5, …
    let pairs = crit.iter().zip(&bc).enumerate().map(|(i, p)| (2 * i + 1, p));
    let pairs = pairs.chain(zeros.iter().zip(&bz).enumerate().map(|(i, p)| (2 * i + 2, p)));
    for (index, (&ik, &bi)) in pairs {
        if (ik - bi).abs() > CROSS_CHECK_TOL {
            return Err(Error::ValidationFailure { family: family.name(), index, ikebe: ik, bisection: bi });
        }
    }
    Ok(())
}

pub fn build_root_tables(count: usize, method: RootMethod) -> Result<RootTables> {
    build_root_tables_with(Execution::default(), count, method, DEFAULT_ORDER.max(20 * count))
}

/// Threshold tables with `count` entries per family. The Ikebe method is
/// cross-checked against bisection before the tables are returned.
pub fn build_root_tables_with(exec: Execution, count: usize, method: RootMethod, order: usize) -> Result<RootTables> {
    if count == 0 {
        return Err(Error::BadParameter("count must be >= 1".into()));
    }
    let (crit, zeros) = (count.div_ceil(2), count / 2);
    let mut seqs = Vec::new();
    for family in [Family::Upper, Family::Lower] {
        let (c, z) = match method {
            RootMethod::Ikebe => {
                let (c, z) = ikebe_family(family, crit, zeros, order)?;
                cross_check(exec, family, &c, &z)?;
                (c, z)
            }
            RootMethod::Bisection => bisection_family(exec, family, crit, zeros)?,
        };
        seqs.push(interleave(&c, &z, count));
    }
    let big = seqs.pop().unwrap();
    let small = seqs.pop().unwrap();
    RootTables::from_sequences(small, big, method, order)
}

/// Roots of `f` in [lo, hi] by grid scan and bisection; fails unless exactly
/// `expected` are found.
pub fn bisection_roots<F>(f: &F, lo: f64, hi: f64, expected: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync,
{
    let roots = sign_change_roots_with(Execution::default(), f, lo, hi, default_grid(lo, hi));
    if roots.len() != expected {
        return Err(Error::CountMismatch { expected, found: roots.len() });
    }
    Ok(roots)
}
