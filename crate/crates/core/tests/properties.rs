use proptest::prelude::*;
use qmeter_core::channels::{complementary, qc_channel};
use qmeter_core::entropy::{relative_entropy, shannon, von_neumann};
use qmeter_core::linalg::{max_abs_diff, partial_trace, purify, tensor, Subsystem};
use qmeter_core::measurement::{entropy_reduction_direct, posteriori};
use qmeter_core::mutual_info::{identity_check, mutual_info_entropic, qc_mutual_info};
use qmeter_core::random::{self, rng};
use qmeter_core::structure::{choi_product_residual, common_range_decomposition, is_irreducible};
use qmeter_core::{DensityOperator, PositiveOperator};

fn state(seed: u64, d: usize, rank: usize) -> DensityOperator {
    random::ginibre(&mut rng(seed, 1), d, rank)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_lies_between_zero_and_log_dimension(seed in any::<u64>(), d in 1usize..7, rank in 1usize..7) {
        let rho = state(seed, d, rank.min(d));
        let h = von_neumann(&rho);
        prop_assert!(h >= -1e-12);
        prop_assert!(h <= (rank.min(d) as f64).ln() + 1e-10);
    }

    #[test]
    fn entropy_is_additive_on_products(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let a = state(seed, da, da);
        let b = random::ginibre_mixed(&mut rng(seed, 2), db);
        let ab = DensityOperator::new(tensor(a.matrix(), b.matrix())).unwrap();
        prop_assert!((von_neumann(&ab) - von_neumann(&a) - von_neumann(&b)).abs() < 1e-10);
    }

    #[test]
    fn scaled_entropy_rule(seed in any::<u64>(), d in 1usize..5, t in 0.01f64..10.0) {
        // H(tA) = t H(A) for the extended entropy
        let a = state(seed, d, d);
        let scaled: PositiveOperator = a.scaled(t);
        prop_assert!((von_neumann(&scaled) - t * von_neumann(&a)).abs() < 1e-10 * t.max(1.0));
    }

    #[test]
    fn relative_entropy_nonnegative_and_monotone(seed in any::<u64>()) {
        let w1 = random::ginibre_mixed(&mut rng(seed, 3), 4);
        let w2 = random::ginibre_mixed(&mut rng(seed, 4), 4);
        let full = relative_entropy(&w1, &w2).unwrap().value();
        prop_assert!(full >= -1e-12);
        let r1 = PositiveOperator::new(partial_trace(w1.matrix(), 2, 2, Subsystem::Second).unwrap()).unwrap();
        let r2 = PositiveOperator::new(partial_trace(w2.matrix(), 2, 2, Subsystem::Second).unwrap()).unwrap();
        prop_assert!(relative_entropy(&r1, &r2).unwrap().value() <= full + 1e-9);
    }

    #[test]
    fn purification_is_pure_with_matching_marginal(seed in any::<u64>(), d in 1usize..5, rank in 1usize..5) {
        let rho = state(seed, d, rank.min(d));
        let hat = purify(&rho);
        let back = partial_trace(&hat, d, d, Subsystem::First).unwrap();
        prop_assert!(max_abs_diff(&back, rho.matrix()) < 1e-10);
        let hat = DensityOperator::new(hat).unwrap();
        prop_assert!(von_neumann(&hat).abs() < 1e-8);
    }

    #[test]
    fn channel_mutual_information_nonnegative(seed in any::<u64>(), d in 1usize..4, kraus in 1usize..4) {
        let rho = state(seed, d, d);
        let phi = random::channel(&mut rng(seed, 5), d, d, kraus);
        let i = mutual_info_entropic(&rho, &phi).unwrap();
        prop_assert!(i >= -1e-10);
        prop_assert!(i <= 2.0 * von_neumann(&rho) + 1e-9);
        let ic = mutual_info_entropic(&rho, &complementary(&phi)).unwrap();
        prop_assert!((i + ic - 2.0 * von_neumann(&rho)).abs() < 1e-8);
    }

    #[test]
    fn entropy_reduction_equals_qc_information(seed in any::<u64>(), d in 1usize..5, n in 1usize..5) {
        let rho = state(seed, d, d);
        let m = random::measurement(&mut rng(seed, 6), d, n);
        let direct = entropy_reduction_direct(&m, &rho).unwrap();
        let via = qc_mutual_info(&rho, &m).unwrap();
        prop_assert!(direct >= -1e-10);
        prop_assert!((direct - via.value()).abs() < 1e-8);
        let out = qc_channel(&m).apply(&rho).unwrap();
        let p: Vec<f64> = (0..m.outcome_count()).map(|i| out.matrix()[(i, i)].re).collect();
        prop_assert!((von_neumann(&out) - shannon(&p)).abs() < 1e-10);
    }

    #[test]
    fn identity_holds_for_efficient_measurements(seed in any::<u64>(), d in 1usize..5, n in 1usize..5) {
        let rho = state(seed, d, d);
        let m = random::measurement(&mut rng(seed, 7), d, n);
        prop_assert!(identity_check(&rho, &m).unwrap() < 1e-8);
    }

    #[test]
    fn efficient_implies_irreducible(seed in any::<u64>(), d in 2usize..5, n in 1usize..5) {
        let m = random::measurement(&mut rng(seed, 8), d, n);
        let report = is_irreducible(&m, 16, seed).unwrap();
        prop_assert!(report.efficient && report.irreducible);
    }

    #[test]
    fn common_range_operations_have_constant_posteriori(seed in any::<u64>(), d in 2usize..4, k in 2usize..4) {
        // A_k = |ψ><φ_k| with a fixed ψ
        let mut r = rng(seed, 9);
        let psi = random::haar_vector(&mut r, d);
        let family = random::kraus_family(&mut r, d, 1, k.max(d));
        let kraus: Vec<_> = family.iter().map(|phi| &psi * phi).collect();
        let m = qmeter_core::Instrument::new(vec![kraus.clone()]).unwrap();
        let cr = common_range_decomposition(&kraus).unwrap();
        let (residual, min_eig) = choi_product_residual(&kraus, &cr.psi).unwrap();
        prop_assert!(residual < 1e-8);
        prop_assert!(min_eig > -1e-10);
        let rho = random::ginibre_mixed(&mut r, d);
        let post = posteriori(&m, &rho).unwrap();
        let s = post.states[0].as_ref().unwrap();
        prop_assert!((s.purity() - 1.0).abs() < 1e-9);
        let report = is_irreducible(&m, 16, seed).unwrap();
        prop_assert!(report.irreducible);
    }
}
