//! Property tests for the algebraic invariants: the dot action composes, the
//! two Bruhat tests agree, lengths behave, displacement rank is inverse
//! invariant, root matching recovers shuffles, and serialization round-trips.

use proptest::prelude::*;

use trianguline::cartan;
use trianguline::flags;
use trianguline::linalg::rat;
use trianguline::perm::Perm;
use trianguline::weyl::{self, EmbeddingShape, IntegralWeight, WeylElement};

fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u32() as usize) % (i + 1);
            v.swap(i, j);
        }
        Perm::from_one_line(&v).unwrap()
    })
}

fn arb_elt(n: usize, sigma: usize) -> impl Strategy<Value = WeylElement> {
    proptest::collection::vec(arb_perm(n), sigma)
        .prop_map(|parts| WeylElement::from_parts(parts).unwrap())
}

fn arb_weight(n: usize, sigma: usize) -> impl Strategy<Value = IntegralWeight> {
    proptest::collection::vec(proptest::collection::vec(-20i64..20, n), sigma)
        .prop_map(|rows| IntegralWeight::new(rows).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dot_action_composes(
        v in arb_elt(4, 1),
        w in arb_elt(4, 1),
        lam in arb_weight(4, 1),
    ) {
        let vw = v.compose(&w).unwrap();
        let lhs = weyl::dot_action(&vw, &lam).unwrap();
        let rhs = weyl::dot_action(&v, &weyl::dot_action(&w, &lam).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dot_action_composes_on_products(
        v in arb_elt(3, 2),
        w in arb_elt(3, 2),
        lam in arb_weight(3, 2),
    ) {
        let vw = v.compose(&w).unwrap();
        let lhs = weyl::dot_action(&vw, &lam).unwrap();
        let rhs = weyl::dot_action(&v, &weyl::dot_action(&w, &lam).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn length_subadditive_and_complementary(x in arb_elt(5, 1), y in arb_elt(5, 1)) {
        let xy = x.compose(&y).unwrap();
        prop_assert!(weyl::length(&xy) <= weyl::length(&x) + weyl::length(&y));
        let w0 = weyl::longest_element(x.shape());
        prop_assert_eq!(
            weyl::length(&w0.compose(&x).unwrap()),
            weyl::length(&w0) - weyl::length(&x)
        );
    }

    #[test]
    fn bruhat_rank_matrix_matches_subword_oracle(x in arb_elt(4, 1), y in arb_elt(4, 1)) {
        prop_assert_eq!(
            weyl::bruhat_leq(&x, &y).unwrap(),
            weyl::oracle::bruhat_leq_subword(&x, &y).unwrap()
        );
    }

    #[test]
    fn bruhat_componentwise_on_products(x in arb_elt(3, 2), y in arb_elt(3, 2)) {
        prop_assert_eq!(
            weyl::bruhat_leq(&x, &y).unwrap(),
            weyl::oracle::bruhat_leq_subword(&x, &y).unwrap()
        );
    }

    #[test]
    fn displacement_rank_inverse_invariant(w in arb_elt(5, 1)) {
        prop_assert_eq!(cartan::d_of(&w), cartan::d_of(&w.inverse()));
        prop_assert_eq!(cartan::d_of(&w) + cartan::fixed_space_dim(&w), 5);
    }

    #[test]
    fn element_serialization_round_trips(w in arb_elt(4, 2)) {
        let json = serde_json::to_string(&w).unwrap();
        let back: WeylElement = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.clone(), w.clone());
        let text = w.serialized();
        prop_assert_eq!(WeylElement::parse(&text, w.shape()).unwrap(), w);
    }

    #[test]
    fn match_roots_recovers_shuffles(
        shuffle in arb_perm(5),
        nums in proptest::collection::hash_set(-50i64..50, 5),
    ) {
        let a: Vec<_> = nums.iter().map(|&k| rat(k, 1)).collect();
        let b: Vec<_> = (0..5).map(|i| a[shuffle.apply(i)].clone()).collect();
        let recovered = flags::match_roots(&a, &b).unwrap();
        prop_assert_eq!(recovered, shuffle);
    }

    #[test]
    fn kl_inverse_and_conjugation_symmetry(x in arb_elt(4, 1), y in arb_elt(4, 1)) {
        // the polynomial is invariant under inversion and under conjugation
        // by the longest element
        let table = trianguline::kl::KlTable::new(EmbeddingShape::new(4, 1).unwrap());
        let p = table.kl_recursive(&x, &y).unwrap();
        let p_inv = table.kl_recursive(&x.inverse(), &y.inverse()).unwrap();
        prop_assert_eq!(&p, &p_inv);
        let w0 = weyl::longest_element(x.shape());
        let conj = |z: &WeylElement| w0.compose(z).unwrap().compose(&w0).unwrap();
        let p_conj = table.kl_recursive(&conj(&x), &conj(&y)).unwrap();
        prop_assert_eq!(&p, &p_conj);
    }

    #[test]
    fn upper_interval_contains_its_bounds(w in arb_elt(4, 1)) {
        let upper = weyl::upper_interval(&w);
        prop_assert!(upper.contains(&w));
        prop_assert!(upper.contains(&weyl::longest_element(w.shape())));
        for z in &upper {
            prop_assert!(weyl::bruhat_leq(&w, z).unwrap());
        }
    }
}
