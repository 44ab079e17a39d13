use pht_core::fixtures::random_maxwell_pair;
use pht_core::greens::{l2_inner_product, random_vector_polynomial, range_residual_batch};
use pht_core::numkernel::DEFAULT_RANK_RTOL;
use pht_core::opspec::Interval;
use pht_core::triplet::build_range_triplet;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn green_identity_holds_on_arbitrary_intervals(
        seed in any::<u64>(),
        a in -2.0f64..1.0,
        len in 0.2f64..2.0,
        n in 1usize..=2,
        order in 1usize..=3,
    ) {
        let interval = Interval::new(a, a + len).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = random_maxwell_pair(&mut rng, n, order, interval);
        let triplet = build_range_triplet(&pair, DEFAULT_RANK_RTOL).unwrap();
        let stats = range_residual_batch(&pair, &triplet, 4, seed, 2 * order + 2).unwrap();
        prop_assert!(stats.max_relative() <= 1e-9, "relative residual {:e}", stats.max_relative());
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(seed in any::<u64>(), n in 1usize..=3) {
        let interval = Interval::new(0.0, 1.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_vector_polynomial(&mut rng, n, 6, interval);
        let v = random_vector_polynomial(&mut rng, n, 6, interval);
        let uv = l2_inner_product(&u, &v).unwrap();
        let vu = l2_inner_product(&v, &u).unwrap();
        prop_assert!((uv - vu.conj()).norm() <= 1e-12 * uv.norm().max(1.0));
        prop_assert!(l2_inner_product(&u, &u).unwrap().re >= 0.0);
    }
}
