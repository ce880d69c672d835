use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use screened_dirac::io::format_g12;
use screened_dirac::model::*;
use screened_dirac::spectrum::count_crests;

fn params(gamma: f64, energy: f64) -> ModelParams {
    ModelParams::new(gamma, energy).unwrap()
}

proptest! {
    #[test]
    fn rhs_is_periodic_in_theta(
        gamma in 0.0..20.0f64, energy in -1.0..1.0f64, z in -FRAC_PI_2..FRAC_PI_2,
        theta in -30.0..30.0f64, k in -5i32..5,
    ) {
        let p = params(gamma, energy);
        let a = theta_rhs(&PruferState { z, theta }, &p);
        let b = theta_rhs(&PruferState { z, theta: theta + TAU * k as f64 }, &p);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn rhs_is_even_in_z(gamma in 0.0..20.0f64, energy in -1.0..1.0f64, z in 0.0..FRAC_PI_2, theta in -10.0..10.0f64) {
        let p = params(gamma, energy);
        prop_assert_eq!(theta_rhs(&PruferState { z, theta }, &p), theta_rhs(&PruferState { z: -z, theta }, &p));
    }

    #[test]
    fn rhs_decreases_with_energy(
        gamma in 0.0..20.0f64, e1 in -1.0..1.0f64, e2 in -1.0..1.0f64,
        z in -FRAC_PI_2..FRAC_PI_2, theta in -10.0..10.0f64,
    ) {
        prop_assume!(e1 < e2);
        let s = PruferState { z, theta };
        prop_assert!(theta_rhs(&s, &params(gamma, e2)) < theta_rhs(&s, &params(gamma, e1)));
    }

    #[test]
    fn rhs_forms_agree(gamma in 0.0..20.0f64, energy in -1.0..1.0f64, z in -1.5..1.5f64, theta in -10.0..10.0f64) {
        let p = params(gamma, energy);
        let a = theta_rhs(&PruferState { z, theta }, &p);
        let b = theta_rhs_at_s(z.tan(), theta, &p);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn equilibria_are_fixed_points(gamma in 0.0..20.0f64, energy in -0.999..0.999f64) {
        let p = params(gamma, energy);
        let points = equilibria(energy).unwrap();
        prop_assert_eq!(points.len(), 4);
        for e in &points {
            prop_assert!(theta_rhs(&e.location, &p).abs() < 1e-12);
            prop_assert_eq!(z_rhs(&e.location), 0.0);
        }
    }

    #[test]
    fn saddles_and_nodes_have_opposite_signs(energy in -0.999..0.999f64) {
        use EquilibriumKind::*;
        for e in equilibria(energy).unwrap() {
            let lam = e.tangential_eigenvalue;
            match e.kind {
                SMinus | NPlus => prop_assert!(lam < 0.0),
                SPlus | NMinus => prop_assert!(lam > 0.0),
                _ => prop_assert!(false, "unexpected kind"),
            }
        }
    }

    #[test]
    fn winding_counts_full_turns(start in -50.0..50.0f64, n in 0i64..6, frac in 0.0..0.999f64) {
        let end = start - TAU * (n as f64 + frac);
        prop_assert_eq!(winding_number(start, end).value(), n);
    }

    #[test]
    fn format_round_trips_to_twelve_digits(x in prop::num::f64::NORMAL) {
        let back: f64 = format_g12(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs());
    }

    #[test]
    fn crest_count_ignores_positive_scaling(values in prop::collection::vec(0.0..1.0f64, 3..60), scale in 1e-3..1e3f64) {
        let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
        prop_assert_eq!(count_crests(&values), count_crests(&scaled));
    }
}

#[test]
fn no_equilibria_outside_the_gap() {
    assert!(equilibria(1.5).is_err());
    assert!(equilibria(f64::NAN).is_err());
    assert_eq!(equilibria(1.0).unwrap().len(), 2);
    assert_eq!(equilibria(-1.0).unwrap()[0].location.theta, PI);
}
