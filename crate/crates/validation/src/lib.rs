//! Independent reference computations for the test suites. Nothing here
//! calls the library's special functions, eigenvalue solvers or shooting code.
#![allow(dead_code)]

use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;
use screened_dirac::roots::{build_root_tables, RootMethod, RootTables};

pub const TABLE_COUNT: usize = 20;

/// Threshold tables built once per process and cached as JSON in `dir`
/// so that other test binaries can reuse them.
pub fn tables(dir: &str) -> &'static RootTables {
    static TABLES: OnceLock<RootTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let path = Path::new(dir).join(format!("root_tables_{TABLE_COUNT}.json"));
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(t) = RootTables::from_json(&text) {
                if t.count() == TABLE_COUNT {
                    return t;
                }
            }
        }
        let t = build_root_tables(TABLE_COUNT, RootMethod::Ikebe).expect("tables build");
        let tmp = path.with_extension(format!("{}.tmp", std::process::id()));
        if std::fs::write(&tmp, t.to_json()).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
        t
    })
}

// ---- finite-difference hamiltonian -------------------------------------

/// Staggered grid: u at s_i = iΔ (|i| ≤ ⌈L/Δ⌉), v at the midpoints. A node
/// sits on the kink of the potential at s = 0.
/// The interleaved unknowns (u_0, v_½, u_1, …, u_m) give a symmetric
/// tridiagonal matrix for
///   E u = (1 − eφ) u − v',   E v = u' − (1 + eφ) v.
struct StaggeredDirac {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl StaggeredDirac {
    fn new(gamma: f64, half_width: f64, h: f64) -> Self {
        let half = (half_width / h).ceil() as i64;
        let m = 2 * half as usize;
        let phi = |s: f64| 0.5 * gamma * (-s.abs()).exp();
        let mut diag = Vec::with_capacity(2 * m + 1);
        let mut off = Vec::with_capacity(2 * m);
        for i in 0..=m {
            let s = (i as i64 - half) as f64 * h;
            diag.push(1.0 - phi(s));
            if i < m {
                off.push(-1.0 / h);
                diag.push(-1.0 - phi(s + 0.5 * h));
                off.push(1.0 / h);
            }
        }
        Self { diag, off }
    }

    /// Number of eigenvalues below `x` (Sturm sequence via LDLᵀ pivots).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for k in 1..self.diag.len() {
            let prev = if d == 0.0 { 1e-300 } else { d };
            d = self.diag[k] - x - self.off[k - 1] * self.off[k - 1] / prev;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalues inside (−1, 1), ascending.
    fn gap_eigenvalues(&self) -> Vec<f64> {
        let below = self.count_below(-1.0);
        let total = self.count_below(1.0) - below;
        (0..total)
            .map(|k| {
                let (mut lo, mut hi) = (-1.0, 1.0);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.count_below(mid) > below + k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }
}

/// Gap eigenvalues of the discretized hamiltonian, Richardson-extrapolated
/// from spacings 2e-3 and 1e-3 on [−L, L].
pub fn fd_gap_eigenvalues(gamma: f64, half_width: f64) -> Vec<f64> {
    let coarse = StaggeredDirac::new(gamma, half_width, 2e-3).gap_eigenvalues();
    let fine = StaggeredDirac::new(gamma, half_width, 1e-3).gap_eigenvalues();
    assert_eq!(coarse.len(), fine.len(), "gap count changed under refinement");
    coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect()
}

/// Domain wide enough for every state with |E| ≤ `max_abs_energy`.
pub fn fd_half_width(max_abs_energy: f64) -> f64 {
    let k = (1.0 - max_abs_energy * max_abs_energy).sqrt();
    40f64.max(30.0 / k)
}

// ---- Gamma by a shifted Stirling series --------------------------------

pub fn stirling_gamma(z: Complex64) -> Complex64 {
    const SHIFT: usize = 30;
    let w = z + SHIFT as f64;
    let series = 1.0 / (12.0 * w) - 1.0 / (360.0 * w.powi(3)) + 1.0 / (1260.0 * w.powi(5)) - 1.0 / (1680.0 * w.powi(7));
    let ln_w = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 0..SHIFT {
        prod *= z + k as f64;
    }
    ln_w.exp() / prod
}

// ---- Tricomi U by quadrature -------------------------------------------

/// U(a, b, z) = Γ(a)⁻¹ ∫₀^∞ e^{−zt} t^{a−1} (1+t)^{b−a−1} dt for Re a > 0 and
/// z on the positive imaginary axis, on the ray t = τ e^{−iπ/4} with τ = eˣ.
pub fn u_by_quadrature(a: Complex64, b: Complex64, z: Complex64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let h = 0.01;
    let (x0, x1) = (-40.0f64, 6.0f64);
    let n = ((x1 - x0) / h).round() as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let x = x0 + k as f64 * h;
        let tau = x.exp();
        let t = rot * tau;
        let f = (-z * t).exp() * (t.ln() * (a - 1.0)).exp() * ((1.0 + t).ln() * (b - a - 1.0)).exp() * rot * tau;
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        sum += w * f;
    }
    sum * h / stirling_gamma(a)
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!((actual - expected).abs() <= tol, "{what}: {actual} vs {expected} (tol {tol})");
}
