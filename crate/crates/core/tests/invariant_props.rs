use census_qa::braid::BraidWord;
use census_qa::invariants::{alexander, closure_component_count, jones, reduced_burau, LaurentPolynomial};
use num_bigint::BigInt;
use proptest::prelude::*;

fn letter(n: usize) -> impl Strategy<Value = i32> + Clone {
    (1..n as i32, any::<bool>()).prop_map(|(l, pos)| if pos { l } else { -l })
}

fn pair(max_n: usize, max_len: usize) -> impl Strategy<Value = (BraidWord, BraidWord)> {
    (2..=max_n).prop_flat_map(move |n| {
        let w = prop::collection::vec(letter(n), 0..=max_len);
        (w.clone(), w).prop_map(move |(a, b)| (BraidWord::new(n, a).unwrap(), BraidWord::new(n, b).unwrap()))
    })
}

fn word(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    pair(max_n, max_len).prop_map(|(w, _)| w)
}

fn knot(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    word(max_n, max_len).prop_filter("closure is a knot", |w| closure_component_count(w) == 1)
}

/// Alexander polynomials are compared only where defined.
fn delta(w: &BraidWord) -> Option<LaurentPolynomial> {
    alexander(w).ok()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, max_global_rejects: 1_000_000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(10_000))]

    #[test]
    fn invariant_under_conjugation((w, a) in pair(5, 12)) {
        let c = w.conjugate(&a).unwrap();
        prop_assert_eq!(jones(&c), jones(&w));
        prop_assert_eq!(delta(&c), delta(&w));
    }

    #[test]
    fn invariant_under_stabilization(w in word(5, 12)) {
        let s = w.stabilize();
        prop_assert_eq!(jones(&s), jones(&w));
        prop_assert_eq!(delta(&s), delta(&w));
    }

    #[test]
    fn invariant_under_flip_and_reverse(w in word(5, 12)) {
        let j = jones(&w);
        let d = delta(&w);
        prop_assert_eq!(jones(&w.flip()), j.clone());
        prop_assert_eq!(jones(&w.reverse()), j);
        prop_assert_eq!(delta(&w.flip()), d.clone());
        prop_assert_eq!(delta(&w.reverse()), d);
    }

    #[test]
    fn mirror_inverts_the_jones_variable(w in word(5, 12)) {
        prop_assert_eq!(jones(&w.mirror()), jones(&w).mirrored());
        prop_assert_eq!(delta(&w.mirror()), delta(&w));
    }
}

proptest! {
    #![proptest_config(config(1_000))]

    #[test]
    fn determinant_from_alexander_matches_jones_at_minus_one(w in knot(5, 12)) {
        let d = alexander(&w).unwrap().eval_minus_one();
        let v = jones(&w).at_minus_one().expect("knots have integral Jones exponents");
        prop_assert_eq!(d.magnitude(), v.magnitude());
    }

    #[test]
    fn alexander_is_symmetric_with_unit_value_at_one(w in knot(6, 14)) {
        let d = alexander(&w).unwrap();
        prop_assert!(d.is_symmetric());
        prop_assert_eq!(d.eval_one(), BigInt::from(1));
        prop_assert_eq!(d.invert_variable(), d);
    }

    #[test]
    fn jones_of_a_knot_is_one_at_one(w in knot(5, 12)) {
        let v = jones(&w).in_t().unwrap();
        prop_assert_eq!(v.eval_one(), BigInt::from(1));
    }

    #[test]
    fn burau_is_multiplicative((u, v) in pair(5, 8)) {
        let uv = u.compose(&v).unwrap();
        prop_assert_eq!(reduced_burau(&uv).unwrap(), reduced_burau(&u).unwrap().mul(&reduced_burau(&v).unwrap()));
    }
}
