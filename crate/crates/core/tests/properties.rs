use proptest::prelude::*;

use sphrect::accessory::{solve, solve_family1, Family, SolverOptions};
use sphrect::constants::k_crit;
use sphrect::modulus::{k_of_modulus, modulus_of_k, ModulusPair};

fn alpha_at(k: f64) -> f64 {
    solve_family1(k, &SolverOptions::default()).unwrap().alpha
}

#[test]
fn alpha_is_continuous_under_refinement() {
    // Steep near k_crit, so check that halving the step shrinks the largest jump.
    let (lo, hi) = (1.1, k_crit() - 0.01);
    let max_jump = |n: usize| {
        let a: Vec<f64> = (0..n).map(|i| alpha_at(lo + (hi - lo) * i as f64 / (n - 1) as f64)).collect();
        a.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
    };
    let coarse = max_jump(50);
    let fine = max_jump(99);
    let finer = max_jump(197);
    assert!(fine < 0.6 * coarse, "{coarse} -> {fine}");
    assert!(finer < 0.6 * fine, "{fine} -> {finer}");
    assert!(finer < 0.03, "{finer}");
}

#[test]
fn alpha_decreases_through_the_first_family() {
    let (lo, hi) = (1.05, k_crit() - 0.001);
    let a: Vec<f64> = (0..40).map(|i| alpha_at(lo + (hi - lo) * i as f64 / 39.0)).collect();
    assert!(a.windows(2).all(|w| w[1] < w[0]), "{a:?}");
    assert!(a[0] > 0.9 && a[39] < 0.1);
}

#[test]
fn dispatch_follows_critical_value() {
    let opts = SolverOptions::default();
    assert_eq!(solve(2.0, &opts).unwrap().family(), Family::First);
    assert_eq!(solve(3.0, &opts).unwrap().family(), Family::Second);
}

proptest! {
    #[test]
    fn modulus_round_trip(k in 1.001f64..50.0) {
        let m = modulus_of_k(k).unwrap();
        let back = k_of_modulus(m).unwrap();
        prop_assert!((back - k).abs() <= 1e-9 * k);
    }

    #[test]
    fn modulus_increases_with_k(k in 1.001f64..50.0, dk in 1e-3f64..1.0) {
        let a = ModulusPair::from_k(k).unwrap();
        let b = ModulusPair::from_k(k + dk).unwrap();
        prop_assert!(b.modulus > a.modulus && b.reciprocal < a.reciprocal);
    }

    #[test]
    fn first_family_solutions_are_consistent(k in 1.01f64..2.42) {
        let s = solve_family1(k, &SolverOptions::default()).unwrap();
        prop_assert!(s.c > 0.0 && s.c < 1.0);
        prop_assert!((s.d + k / s.c).abs() <= 1e-12 * s.d.abs());
        prop_assert!(s.residual.abs() <= 1e-9);
        prop_assert!((0.0..1.0).contains(&s.alpha));
        prop_assert!(s.alpha_orbit <= 0.5);
    }
}
