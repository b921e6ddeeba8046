use lmbd::ensemble::{binomial_accuracy, ensemble_accuracy, majority_threshold, EnsembleSpec};
use lmbd::factorization::{delta, delta_positive_sum, DeltaValue};
use lmbd::mbd::conditional_cpr_given;
use lmbd::{enumerate_pmf_oracle, marginal_pi, moments, pmf, sample, ModelParams};
use proptest::prelude::*;

fn interior_psi() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

fn omega() -> impl Strategy<Value = f64> {
    (-2.5f64..2.5).prop_map(f64::exp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pmf_is_normalized(n in 1usize..200, psi in interior_psi(), omega in omega()) {
        let probs = pmf(&ModelParams::new(n, psi, omega).unwrap()).probs();
        prop_assert!(probs.iter().all(|p| p.is_finite() && *p >= 0.0));
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_symmetry(n in 1usize..60, psi in interior_psi(), omega in omega()) {
        let a = pmf(&ModelParams::new(n, psi, omega).unwrap()).probs();
        let b = pmf(&ModelParams::new(n, 1.0 - psi, omega).unwrap()).probs();
        for y in 0..=n {
            prop_assert!((a[y] - b[n - y]).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_enumeration(n in 1usize..12, psi in interior_psi(), omega in omega()) {
        let params = ModelParams::new(n, psi, omega).unwrap();
        let fast = pmf(&params).probs();
        let brute = enumerate_pmf_oracle(&params).unwrap().probs();
        for (a, b) in fast.iter().zip(&brute) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn cpr_identity_for_any_conditioning(
        rest in proptest::collection::vec(any::<bool>(), 0..9),
        psi in interior_psi(),
        omega in omega(),
    ) {
        let params = ModelParams::new(rest.len() + 2, psi, omega).unwrap();
        let cpr = conditional_cpr_given(&params, &rest).unwrap();
        prop_assert!((1.0 / cpr.sqrt() / omega - 1.0).abs() < 1e-10);
    }

    #[test]
    fn moments_match_table(n in 1usize..40, psi in interior_psi(), omega in omega()) {
        let params = ModelParams::new(n, psi, omega).unwrap();
        let table = pmf(&params);
        let m = moments(&params);
        prop_assert!((m.mean - table.mean()).abs() <= 1e-9 * (1.0 + table.mean()));
        prop_assert!((m.variance - table.variance()).abs() <= 1e-9 * (1.0 + table.variance()));
        prop_assert!((m.pi - marginal_pi(&params)).abs() < 1e-15);
    }

    #[test]
    fn delta_routes_agree(n in 2usize..14, psi in interior_psi(), omega in omega()) {
        let params = ModelParams::new(n, psi, omega).unwrap();
        let positive = delta_positive_sum(&params);
        prop_assert!(positive > 0.0);
        if let DeltaValue::Defined(d) = delta(&params) {
            prop_assert!((d / positive - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn accuracy_is_a_probability(n in 1usize..80, psi in interior_psi(), omega in omega()) {
        let params = ModelParams::new(n, psi, omega).unwrap();
        let acc = ensemble_accuracy(&EnsembleSpec::new(params));
        prop_assert!((0.0..=1.0).contains(&acc));
        let tail: f64 = pmf(&params).probs()[majority_threshold(n) + 1..].iter().sum();
        prop_assert!((acc - tail).abs() < 1e-12);
    }

    #[test]
    fn independence_reduces_to_binomial_accuracy(n in 1usize..=50, p in 0.0f64..=1.0) {
        let acc = ensemble_accuracy(&EnsembleSpec::new(ModelParams::binomial(n, p).unwrap()));
        prop_assert!((acc - binomial_accuracy(n, p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_seed_deterministic(n in 1usize..30, psi in interior_psi(), omega in omega(), seed in any::<u64>()) {
        let params = ModelParams::new(n, psi, omega).unwrap();
        let a = sample(&params, 64, seed);
        prop_assert_eq!(&a, &sample(&params, 64, seed));
        prop_assert!(a.iter().all(|&y| y <= n));
    }
}

#[test]
fn strong_negative_association_approaches_psi_accuracy() {
    for n in [3, 5, 9, 15] {
        let mut last = f64::INFINITY;
        for omega in [1e2, 1e4, 1e6, 1e8] {
            let acc =
                ensemble_accuracy(&EnsembleSpec::new(ModelParams::new(n, 0.7, omega).unwrap()));
            let gap = (acc - 0.7).abs();
            assert!(gap <= last + 1e-15);
            last = gap;
        }
        assert!(last < 1e-5, "n = {n}: gap {last}");
    }
}

#[test]
fn marginal_below_psi_under_negative_association() {
    for n in 2..=15 {
        for psi in [0.5, 0.6, 0.75, 0.9] {
            for omega in [1.05, 1.5, 2.0, 5.0] {
                let params = ModelParams::new(n, psi, omega).unwrap();
                let pi = marginal_pi(&params);
                if psi == 0.5 {
                    assert!((pi - 0.5).abs() < 1e-12);
                } else {
                    assert!(psi > pi, "n={n} psi={psi} omega={omega} pi={pi}");
                }
            }
        }
    }
}
