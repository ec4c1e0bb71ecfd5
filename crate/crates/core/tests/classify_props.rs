mod common;

use common::*;
use eo_core::classify::{
    find_pairing, is_pure, is_rebalancing, membership_a, membership_eo_class, pi_embed, tau_decompose, triple_class,
    Class, Direction, Pairing,
};
use eo_core::Signature;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nonzero_eo(rng: &mut ChaCha8Rng) -> Signature {
    loop {
        let k = if rng.gen_bool(0.7) { 4 } else { 6 };
        let f = random_eo(k, rng);
        if !f.is_zero() {
            return f;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dual_swaps_up_and_down(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = nonzero_eo(&mut rng);
        let t = triple_class(&f).unwrap();
        let d = triple_class(&f.dual()).unwrap();
        prop_assert_eq!(t.exists3up.is_some(), d.exists3down.is_some());
        prop_assert_eq!(t.exists3down.is_some(), d.exists3up.is_some());
        prop_assert_eq!(t.exists3mid.is_some(), d.exists3mid.is_some());
    }

    #[test]
    fn pure_excludes_opposite_triples(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = nonzero_eo(&mut rng);
        let t = triple_class(&f).unwrap();
        if is_pure(&f, Direction::Up).unwrap() {
            prop_assert!(t.exists3down.is_none());
        }
        if is_pure(&f, Direction::Down).unwrap() {
            prop_assert!(t.exists3up.is_none());
        }
    }

    #[test]
    fn rebalancing_gives_mid_or_forall_up(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = nonzero_eo(&mut rng);
        if is_rebalancing(&f, 0).unwrap().holds {
            let t = triple_class(&f).unwrap();
            prop_assert!(t.exists3mid.is_some() || t.forall_up());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn affine_embeddings_pair_and_lift(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_affine(d, &mut rng);
        prop_assume!(!g.is_zero());
        let f = pi_embed(&g).unwrap();
        prop_assert!(f.is_eo());
        prop_assert!(membership_a(&f).unwrap().is_member());
        prop_assert!(find_pairing(&f).unwrap().is_some());
        prop_assert!(membership_eo_class(&f, Class::A).unwrap().member);
        prop_assert!(tau_decompose(&f, &Pairing::natural(d)).unwrap().contains(&g));
    }

    #[test]
    fn product_embeddings_lift(seed in any::<u64>(), d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_product(d, &mut rng);
        prop_assume!(!g.is_zero());
        let f = pi_embed(&g).unwrap();
        prop_assert!(membership_eo_class(&f, Class::P).unwrap().member);
        prop_assert!(tau_decompose(&f, &Pairing::natural(d)).unwrap().contains(&g));
    }
}
