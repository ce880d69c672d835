//! Acceptance suite. Every criterion runs, one PASS/FAIL line each; the
//! process exits nonzero if any of them failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use screened_dirac::model::ModelParams;
use screened_dirac::ode::IntegratorConfig;
use screened_dirac::par::Execution;
use screened_dirac::roots::*;
use screened_dirac::specfun::*;
use screened_dirac::spectrum::*;
use screened_dirac_validation::{fd_gap_eigenvalues, fd_half_width};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn root_tables(t: &RootTables) -> Outcome {
    let gamma = [1.230870178, 2.934791015, 5.218667468, 7.643742568];
    let big = [7.3148, 11.6282, 15.3354, 18.9491];
    let dg = (0..4).map(|k| (t.gamma(k + 1) - gamma[k]).abs()).fold(0.0, f64::max);
    let db = (0..4).map(|k| (t.big_gamma(k + 1) - big[k]).abs()).fold(0.0, f64::max);
    check(dg < 1e-6 && db < 1e-3, format!("max |dgamma| = {dg:.2e}, max |dGamma| = {db:.2e}"))
}

fn cross_validation(t: &RootTables) -> Outcome {
    let bis = build_root_tables_with(Execution::Parallel, 20, RootMethod::Bisection, t.truncation_order())
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for k in 1..=20 {
        worst = worst.max((t.gamma(k) - bis.gamma(k)).abs()).max((t.big_gamma(k) - bis.big_gamma(k)).abs());
    }
    let mut sim = 0.0f64;
    for eta in [1.0, -1.0] {
        let pairs = [
            (ikebe_zero_matrix(0, eta, 200), ikebe_zero_matrix(0, -eta, 200)),
            (ikebe_critical_matrix(0, eta, 200), ikebe_critical_matrix(0, -eta, 200)),
        ];
        for (a, b) in pairs {
            let a = symmetric_tridiagonal_eigenvalues(&a.unwrap().negated()).unwrap();
            let b = symmetric_tridiagonal_eigenvalues(&b.unwrap()).unwrap();
            sim = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(sim, f64::max);
        }
    }
    check(worst < 1e-6 && sim < 1e-10, format!("ikebe vs bisection {worst:.2e}, similarity {sim:.2e}"))
}

fn separation(t: &RootTables) -> Outcome {
    let slack = (1..=20).map(|j| t.big_gamma(j) - t.gamma(j) - 2.31).fold(f64::INFINITY, f64::min);
    check(slack > 0.0, format!("min (Gamma_j - gamma_j - 2.31) = {slack:.4}"))
}

fn counts(t: &RootTables) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (gamma, expected) in [(0.5, (0, 1)), (5.0, (0, 3)), (7.5, (1, 3))] {
        let start = Instant::now();
        let s = enumerate_bound_states(gamma, 1e-8, t, &IntegratorConfig::default()).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let got = (s.ground_winding, s.count);
        ok &= got == expected && secs < 60.0;
        parts.push(format!("gamma {gamma}: {got:?} in {secs:.2}s"));
    }
    check(ok, parts.join(", "))
}

const COUPLINGS: [f64; 5] = [0.5, 2.0, 5.0, 7.5, 10.0];

fn spectra(t: &RootTables) -> Vec<SpectrumSummary> {
    COUPLINGS.iter().map(|&g| enumerate_bound_states(g, 1e-8, t, &IntegratorConfig::default()).unwrap()).collect()
}

fn eigenvalues(spectra: &[SpectrumSummary]) -> Outcome {
    let mut ok = true;
    let mut worst = 0.0f64;
    for s in spectra {
        let e = s.energies();
        ok &= e.iter().all(|x| x.abs() < 1.0) && e.windows(2).all(|w| w[0] < w[1]);
        let fd = fd_gap_eigenvalues(s.gamma, fd_half_width(*e.last().unwrap()));
        ok &= fd.len() == e.len();
        worst = e.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    check(ok && worst < 1e-5, format!("in gap and increasing: {ok}, max |E - E_fd| = {worst:.2e}"))
}

fn invariants(spectra: &[SpectrumSummary]) -> Outcome {
    let (mut norm, mut refl, mut prufer) = (0.0f64, 0.0f64, 0.0f64);
    let mut crests = true;
    for s in spectra {
        for st in &s.states {
            let p = ModelParams::new(s.gamma, st.energy).unwrap();
            norm = norm.max((st.normalization() - 1.0).abs());
            refl = refl.max(reflection_defect(st, &p).map_err(|e| e.to_string())?);
            prufer = prufer.max(prufer_consistency(st, &p).map_err(|e| e.to_string())?);
            crests &= st.crest_count() == st.winding as usize + 1;
        }
    }
    check(
        norm < 1e-6 && refl < 1e-6 && prufer < 1e-5 && crests,
        format!("normalization {norm:.1e}, reflection {refl:.1e}, pruefer {prufer:.1e}, crests ok: {crests}"),
    )
}

fn barrier_counts(t: &RootTables) -> Outcome {
    let mut bad = Vec::new();
    let floor = |x: f64| x.floor() as usize;
    for k in 1..=8 {
        let gamma = 0.5 * (t.gamma(k - 1) + t.gamma(k));
        let kf = k as f64;
        for (parity, expected) in [(Parity::Odd, floor(kf / 2.0 + 1.0)), (Parity::Even, floor(kf / 2.0 + 0.5))] {
            let got = barrier_solution(EnergySign::Plus, parity, gamma)
                .and_then(|b| b.critical_point_count())
                .map_err(|e| e.to_string())?;
            if got != expected {
                bad.push(format!("E=+1 {parity:?} k={k}: {got} != {expected}"));
            }
        }
    }
    for j in 1..=6 {
        let gamma = 0.5 * (t.big_gamma(j - 1) + t.big_gamma(j));
        let jf = j as f64;
        for (parity, expected) in [(Parity::Odd, floor(jf / 2.0)), (Parity::Even, floor(jf / 2.0 + 0.5))] {
            let got = barrier_solution(EnergySign::Minus, parity, gamma)
                .and_then(|b| b.root_count())
                .map_err(|e| e.to_string())?;
            if got != expected {
                bad.push(format!("E=-1 {parity:?} j={j}: {got} != {expected}"));
            }
        }
    }
    check(bad.is_empty(), if bad.is_empty() { "28 counts match".into() } else { bad.join("; ") })
}

fn whittaker_residual(kappa: Complex64, sign: f64) -> f64 {
    let d = |r: f64| whittaker_m_with_derivative(kappa, 0.5, Complex64::new(0.0, r)).unwrap();
    let h = 1e-4;
    (0..=200)
        .map(|i| {
            let r = 0.1 + 19.9 * i as f64 / 200.0;
            let w = Complex64::new(0.0, -1.0) * d(r).0;
            let second = (d(r + h).1 - d(r - h).1) / (2.0 * h);
            (second + (0.25 + sign / r) * w).norm()
        })
        .fold(0.0, f64::max)
}

fn residuals() -> Outcome {
    let plus = whittaker_residual(Complex64::new(0.0, -1.0), 1.0);
    let minus = whittaker_residual(Complex64::new(0.0, 1.0), -1.0);
    check(plus < 1e-8 && minus < 1e-8, format!("max residual {:.2e} (E=+1), {:.2e} (E=-1)", plus, minus))
}

fn gamma_modulus() -> Outcome {
    let g = complex_gamma(Complex64::new(1.0, 1.0)).map_err(|e| e.to_string())?;
    let pi = std::f64::consts::PI;
    let d = (g.norm_sqr() - pi / pi.sinh()).abs();
    check(d < 1e-10, format!("||Gamma(1+i)|^2 - pi/sinh(pi)| = {d:.2e}"))
}

fn small_argument_limit() -> Outcome {
    let w = whittaker_w(Complex64::new(0.0, -1.0), 0.5, Complex64::new(0.0, 1e-6)).map_err(|e| e.to_string())?;
    let limit = reciprocal_gamma(Complex64::new(1.0, 1.0));
    let d = (w - limit).norm();
    check(d < 1e-6, format!("|W(1e-6 i) - 1/Gamma(1+i)| = {d:.3e} (the z ln z term alone is this large)"))
}

fn staircase_consistency(t: &RootTables) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut mismatches = Vec::new();
    for _ in 0..50 {
        let gamma = 12.0 - 12.0 * rng.random::<f64>();
        let step = stair_step(gamma, t).map_err(|e| e.to_string())?;
        let s = enumerate_bound_states(step.gamma, 1e-8, t, &IntegratorConfig::default()).map_err(|e| e.to_string())?;
        if (step.ground_winding, step.count) != (s.ground_winding as usize, s.count) {
            mismatches.push(format!("{gamma}"));
        }
    }
    let steps = staircase(1e-3, 12.0, 12_000, t).map_err(|e| e.to_string())?;
    let entries: Vec<f64> = t.gamma_seq().iter().chain(t.big_gamma_seq()).copied().collect();
    let stray = steps
        .windows(2)
        .filter(|w| {
            let changed = (w[0].ground_winding, w[0].count) != (w[1].ground_winding, w[1].count);
            let crossed = entries.iter().any(|&g| w[0].gamma < g && g <= w[1].gamma);
            changed != crossed
        })
        .count();
    check(
        mismatches.is_empty() && stray == 0,
        format!("{} of 50 random couplings disagree, {stray} stray jumps", mismatches.len()),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |name: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    };

    let built = build_root_tables(20, RootMethod::Ikebe);
    let tables = match &built {
        Ok(t) => t,
        Err(e) => {
            println!("FAIL  tables could not be built: {e}");
            std::process::exit(1);
        }
    };
    report("1 root tables", &|| root_tables(tables));
    report("2 ikebe/bisection cross-validation", &|| cross_validation(tables));
    report("3 separation", &|| separation(tables));
    report("4 bound-state counts", &|| counts(tables));
    let all = spectra(tables);
    report("5 eigenvalues", &|| eigenvalues(&all));
    report("6 wavefunction invariants", &|| invariants(&all));
    report("7 barrier counts", &|| barrier_counts(tables));
    report("8a whittaker residuals", &residuals);
    report("8b |Gamma(1+i)|^2", &gamma_modulus);
    report("8c small-argument limit of W", &small_argument_limit);
    report("9 staircase consistency", &|| staircase_consistency(tables));

    if failed > 0 {
        println!("{failed} criterion checks failed");
        std::process::exit(1);
    }
}
