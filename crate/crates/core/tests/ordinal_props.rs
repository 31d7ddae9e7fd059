use std::cmp::Ordering;

use proptest::prelude::*;

use ordcov::degree_word::{canonicalize, degree_word, greatest_sequence, lex_compare, DEFAULT_ITERATION_CAP};
use ordcov::fundamental::{covers, fund_seq, up_set};
use ordcov::ordinal::{add, classify, enumerate_ordinals, is_limit, mul_nat, tower, EnumConfig, OrdinalKind};
use ordcov::syntax::{format_ordinal, parse_ordinal};
use ordcov::Ordinal;

/// Ordinals below `omega^^3`: sums of monomials whose exponents are again
/// such sums over natural exponents.
fn ordinal() -> impl Strategy<Value = Ordinal> {
    let nat = 0u64..4;
    let small = prop::collection::vec((nat.clone(), 1u64..4), 0..3).prop_map(|ts| {
        ts.into_iter().fold(Ordinal::zero(), |acc, (e, c)| {
            add(&acc, &Ordinal::monomial(Ordinal::nat(e), c))
        })
    });
    prop::collection::vec((small, 1u64..4), 0..4).prop_map(|ts| {
        ts.into_iter()
            .fold(Ordinal::zero(), |acc, (e, c)| add(&acc, &Ordinal::monomial(e, c)))
    })
}

fn limit() -> impl Strategy<Value = Ordinal> {
    ordinal().prop_filter("limit", is_limit)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn compare_is_a_total_order(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn add_is_associative_with_identity(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(add(&a, &Ordinal::zero()), a.clone());
        prop_assert_eq!(add(&Ordinal::zero(), &a), a);
    }

    #[test]
    fn add_is_weakly_increasing(a in ordinal(), b in ordinal()) {
        let s = add(&a, &b);
        prop_assert!(a <= s);
        prop_assert!(a < add(&a, &Ordinal::nat(1)));
        prop_assert!(b <= s);
    }

    #[test]
    fn successor_classifies_back(a in ordinal()) {
        prop_assert_eq!(classify(&a.succ()), OrdinalKind::Successor(a.clone()));
        prop_assert_eq!(a.succ(), add(&a, &Ordinal::nat(1)));
    }

    #[test]
    fn mul_nat_is_repeated_addition(a in ordinal(), n in 0u64..5) {
        let sum = (0..n).fold(Ordinal::zero(), |acc, _| add(&acc, &a));
        prop_assert_eq!(mul_nat(&a, n), sum);
    }

    #[test]
    fn text_round_trip(a in ordinal()) {
        prop_assert_eq!(parse_ordinal(&format_ordinal(&a)).unwrap(), a);
    }

    #[test]
    fn fundamental_sequences_increase_below_the_limit(a in limit()) {
        let xs: Vec<Ordinal> = (0..=10).map(|n| fund_seq(&a, n).unwrap()).collect();
        for (n, w) in xs.windows(2).enumerate() {
            prop_assert!(w[0] < w[1] && w[1] < a, "step {}", n);
            prop_assert!(covers(&w[0], &a).is_some());
        }
    }

    #[test]
    fn up_set_matches_covers(l in ordinal(), m in ordinal()) {
        let bound = tower(3);
        let ups = up_set(&l, &bound);
        prop_assert!(ups.len() <= 3);
        prop_assert!(ups.windows(2).all(|w| w[0] < w[1]));
        for x in &ups {
            prop_assert!(l < *x && covers(&l, x).is_some());
        }
        prop_assert_eq!(ups.contains(&m), covers(&l, &m).is_some());
    }

    #[test]
    fn crossing_free_on_random_edges(a1 in ordinal(), l1 in ordinal(), pick in 0usize..3) {
        let bound = tower(3);
        let ups = up_set(&a1, &bound);
        let a2 = &ups[pick % ups.len()];
        if a1 < l1 && l1 < *a2 {
            for l2 in up_set(&l1, &bound) {
                prop_assert!(l2 <= *a2);
            }
        }
    }

    #[test]
    fn degree_words_are_ordered(a in ordinal(), b in ordinal()) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (u, v) = (degree_word(&lo).unwrap(), degree_word(&hi).unwrap());
        prop_assert_eq!(lex_compare(&u, &v), Ordering::Less);
    }

    #[test]
    fn canonicalize_is_idempotent_and_faithful(a in ordinal()) {
        let w = degree_word(&a).unwrap();
        let c = canonicalize(&w);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert_eq!(c.expand(40), w.expand(40));
    }

    #[test]
    fn greatest_sequence_steps_are_edges(a in limit()) {
        let seq = greatest_sequence(&a, DEFAULT_ITERATION_CAP).unwrap();
        let xs: Vec<&Ordinal> = seq.entries.iter().map(|e| &e.0).collect();
        for w in xs.windows(2) {
            prop_assert!(w[0] < w[1] && covers(w[0], w[1]).is_some());
        }
        for k in 0..3 {
            let f = fund_seq(&a, k).unwrap();
            prop_assert!(xs.contains(&&f), "a[{}] = {} missing", k, f);
        }
    }
}

#[test]
fn text_round_trip_on_the_enumeration_sample() {
    let cfg = EnumConfig {
        coef_cap: 2,
        ..EnumConfig::default()
    };
    let sample = enumerate_ordinals(3, 2, &tower(3), &cfg).unwrap();
    assert!(sample.len() > 20_000);
    for a in &sample {
        assert_eq!(&parse_ordinal(&format_ordinal(a)).unwrap(), a);
    }
}
