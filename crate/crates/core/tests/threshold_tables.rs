#[path = "../../validation/src/lib.rs"]
mod oracle;

use screened_dirac::par::Execution;
use screened_dirac::roots::*;
use screened_dirac::Error;

fn tables() -> &'static RootTables {
    oracle::tables(env!("CARGO_TARGET_TMPDIR"))
}

const GAMMA: [f64; 4] = [1.2308701782872487, 2.9347910148986283, 5.218667468237079, 7.643742568370001];
const BIG_GAMMA: [f64; 4] = [7.314821275013291, 11.628231231753125, 15.33535555823529, 18.94906783674864];

#[test]
fn leading_entries() {
    let t = tables();
    assert_eq!(t.count(), oracle::TABLE_COUNT);
    for k in 0..4 {
        assert!((t.gamma(k + 1) - GAMMA[k]).abs() < 1e-9, "gamma_{}", k + 1);
        assert!((t.big_gamma(k + 1) - BIG_GAMMA[k]).abs() < 1e-9, "Gamma_{}", k + 1);
    }
    assert_eq!(t.gamma(0), 0.0);
    assert_eq!(t.big_gamma(0), 0.0);
}

#[test]
fn sequences_increase_and_separate() {
    let t = tables();
    for seq in [t.gamma_seq(), t.big_gamma_seq()] {
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
    }
    for k in 1..=t.count() {
        assert!(t.gamma(k) + 2.31 < t.big_gamma(k), "k = {k}");
    }
}

#[test]
fn ikebe_agrees_with_bisection() {
    let ik = build_root_tables_with(Execution::Parallel, 8, RootMethod::Ikebe, 400).unwrap();
    let bi = build_root_tables_with(Execution::Parallel, 8, RootMethod::Bisection, 400).unwrap();
    for k in 1..=8 {
        assert!((ik.gamma(k) - bi.gamma(k)).abs() < CROSS_CHECK_TOL);
        assert!((ik.big_gamma(k) - bi.big_gamma(k)).abs() < CROSS_CHECK_TOL);
    }
    assert_eq!(bi.method(), RootMethod::Bisection);
}

#[test]
fn sequential_and_parallel_builds_match() {
    let a = build_root_tables_with(Execution::Sequential, 4, RootMethod::Ikebe, 200).unwrap();
    let b = build_root_tables_with(Execution::Parallel, 4, RootMethod::Ikebe, 200).unwrap();
    assert_eq!(a, b);
}

#[test]
fn entries_are_roots_of_the_threshold_functions() {
    let t = tables();
    for k in 1..=8 {
        let slot = if k % 2 == 1 { 1 } else { 0 };
        let pick = |(y, dy): (f64, f64)| if slot == 1 { dy } else { y };
        assert!(pick(threshold_function(Family::Upper, t.gamma(k)).unwrap()).abs() < 1e-8);
        assert!(pick(threshold_function(Family::Lower, t.big_gamma(k)).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn similarity_flips_the_coupling() {
    let eta = 1.0;
    for m in [ikebe_zero_matrix(0, eta, 200).unwrap(), ikebe_critical_matrix(0, eta, 200).unwrap()] {
        let flipped: Vec<f64> = symmetric_tridiagonal_eigenvalues(&m.negated()).unwrap();
        let other = if m.diagonal()[0] == ikebe_zero_matrix(0, eta, 200).unwrap().diagonal()[0] {
            ikebe_zero_matrix(0, -eta, 200).unwrap()
        } else {
            ikebe_critical_matrix(0, -eta, 200).unwrap()
        };
        let direct = symmetric_tridiagonal_eigenvalues(&other).unwrap();
        for (a, b) in flipped.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn order_is_validated() {
    assert!(ikebe_zero_matrix(0, 1.0, MIN_ORDER - 1).is_err());
    assert!(build_root_tables_with(Execution::Sequential, 0, RootMethod::Ikebe, 400).is_err());
}

#[test]
fn bisection_roots_counts() {
    let roots = bisection_roots(&|x: f64| x.sin(), 1.0, 10.0, 3).unwrap();
    assert!((roots[2] - 3.0 * std::f64::consts::PI).abs() < 1e-10);
    assert_eq!(bisection_roots(&|x: f64| x.sin(), 1.0, 10.0, 2), Err(Error::CountMismatch { expected: 2, found: 3 }));
}

#[test]
fn interval_indices_follow_the_tables() {
    let t = tables();
    assert_eq!(t.interval_indices(0.5).unwrap(), (1, 0));
    assert_eq!(t.interval_indices(2.0).unwrap(), (2, 0));
    assert_eq!(t.interval_indices(5.0).unwrap(), (3, 0));
    assert_eq!(t.interval_indices(7.5).unwrap(), (4, 1));
    assert_eq!(t.interval_indices(10.0).unwrap(), (5, 1));
    assert_eq!(t.interval_indices(t.gamma(1)).unwrap(), (2, 0));
    assert_eq!(t.interval_indices(t.big_gamma(1)).unwrap(), (4, 1));
    assert!(matches!(t.interval_indices(1e6), Err(Error::TableTooShort { .. })));
    assert!(t.interval_indices(-1.0).is_err());
}

#[test]
fn json_round_trip_and_csv() {
    let t = tables();
    let back = RootTables::from_json(&t.to_json()).unwrap();
    assert_eq!(&back, t);
    let csv = t.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "index,kind,gamma_value,big_gamma_value");
    assert_eq!(lines.len(), t.count() + 1);
    assert!(lines[1].starts_with("1,critical,1.23087017829,"));
    assert!(lines[2].starts_with("2,zero,"));
    assert!(RootTables::from_json("{}").is_err());
}
