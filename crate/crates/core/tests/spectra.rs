use std::sync::Arc;

use cfsum_core::closer::{shifted_basis, SumProblem, TermFactor};
use cfsum_core::exact::{composed_product, Poly};
use cfsum_core::scalar::Field;
use cfsum_core::spectra::{degree_p_value_set, formal_count, hyperdiscriminant, uniqueness_report};
use cfsum_core::{builtin, CFiniteSequence, ExactScalar as Q, SeqRef};
use num_traits::Zero;
use proptest::prelude::*;

fn named(kind: &str, params: &[i64]) -> SeqRef {
    let params: Vec<Q> = params.iter().map(|&v| Q::of(v)).collect();
    Arc::new(builtin(kind, &params).unwrap())
}

#[test]
fn one_is_a_fibonacci_monomial_value_iff_four_divides_p() {
    let f = named("fibonacci", &[]);
    for p in 0..=12 {
        assert_eq!(degree_p_value_set(&f, p).unwrap().contains_one(), p % 4 == 0, "p = {p}");
    }
}

#[test]
fn one_is_a_subword_monomial_value_iff_six_divides_p() {
    for a in [3, 4, 5] {
        let g = named("subword", &[a]);
        for p in 0..=8 {
            assert_eq!(degree_p_value_set(&g, p).unwrap().contains_one(), p % 6 == 0, "A = {a}, p = {p}");
        }
    }
}

/// Root multiset of all degree-`p` words, without any reduction.
fn full_multiset(f: &Poly<Q>, p: usize) -> Poly<Q> {
    let mut acc = Poly::from_coeffs(vec![Q::of(-1), Q::of(1)]);
    for _ in 0..p {
        acc = composed_product(&acc, f).unwrap();
    }
    acc
}

fn arb_distinct_root_sequence() -> impl Strategy<Value = CFiniteSequence> {
    (prop::collection::vec(-3i64..=3, 2..=3), prop_oneof![Just(1i64), Just(-1)]).prop_filter_map(
        "repeated roots",
        |(mut rec, last)| {
            let d = rec.len();
            rec[d - 1] = last;
            let mut init = vec![Q::of(0); d];
            init[d - 1] = Q::of(1);
            let s = CFiniteSequence::new("S", rec.into_iter().map(Q::of).collect(), init).ok()?;
            (s.spectral_profile().delta == 0).then_some(s)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn interleaved_reduction_keeps_the_value_set(s in arb_distinct_root_sequence(), p in 1usize..=3) {
        let reduced = degree_p_value_set(&s, p).unwrap();
        let full = full_multiset(&s.char_poly(), p).squarefree_part();
        prop_assert_eq!(reduced.poly, full);
    }

    #[test]
    fn intersection_is_symmetric(s in arb_distinct_root_sequence(), p in 0usize..=4, q in 0usize..=4) {
        let sp = degree_p_value_set(&s, p).unwrap();
        let sq = degree_p_value_set(&s, q).unwrap();
        prop_assert_eq!(sp.intersection_size(&sq), sq.intersection_size(&sp));
    }

    #[test]
    fn cardinality_bound_and_distinctness(s in arb_distinct_root_sequence(), p in 1usize..=4) {
        let d = s.spectral_profile().distinct;
        let card = degree_p_value_set(&s, p).unwrap().cardinality();
        let formal = formal_count(d, p).unwrap();
        prop_assert!(card <= formal);
        let distinct = !hyperdiscriminant(&s, p).unwrap().is_zero();
        prop_assert_eq!(card == formal, distinct);
    }
}

#[test]
fn power_sum_uniqueness_matches_distinctness() {
    // With 1 outside S_p, the power-sum basis is unique exactly when the
    // degree-p monomials take distinct values.
    for a in [3, 4] {
        let g = named("subword", &[a]);
        for p in [1, 2, 3, 5] {
            let prob = SumProblem::new(vec![TermFactor::new(g.clone(), 0, 1, 0); p]).unwrap();
            let basis = shifted_basis(&prob, false).unwrap();
            let unique = uniqueness_report(&prob, &basis).unwrap().is_unique();
            let distinct = !hyperdiscriminant(&g, p).unwrap().is_zero();
            assert_eq!(unique, distinct, "A = {a}, p = {p}");
        }
    }
}
