use std::sync::Arc;

use cfsum_core::exact::Poly;
use cfsum_core::scalar::Field;
use cfsum_core::{CFiniteSequence, ExactScalar as Q, SeqRef};
use proptest::prelude::*;

fn arb_sequence(max_order: usize) -> impl Strategy<Value = CFiniteSequence> {
    (1..=max_order)
        .prop_flat_map(|d| {
            (
                prop::collection::vec(-3i64..=3, d),
                prop::collection::vec(-3i64..=3, d),
                prop_oneof![Just(1i64), Just(-1i64), Just(2i64)],
            )
        })
        .prop_filter_map("zero sequence", |(mut rec, init, last)| {
            if init.iter().all(|&v| v == 0) {
                return None;
            }
            let d = rec.len();
            rec[d - 1] = last;
            CFiniteSequence::new("S", rec.into_iter().map(Q::of).collect(), init.into_iter().map(Q::of).collect()).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimize_preserves_values(s in arb_sequence(5)) {
        let m = s.minimize().unwrap();
        prop_assert!(m.order() <= s.order());
        for n in 0..3 * s.order() as i64 {
            prop_assert_eq!(m.evaluate(n).unwrap(), s.evaluate(n).unwrap());
        }
    }

    #[test]
    fn profile_multiplicities_sum_to_order(s in arb_sequence(5)) {
        let prof = s.spectral_profile();
        prop_assert_eq!(prof.multiplicities.iter().map(|&e| e as usize).sum::<usize>(), s.order());
        prop_assert_eq!(prof.multiplicities.len(), prof.distinct);
    }

    #[test]
    fn backward_then_forward(s in arb_sequence(4)) {
        let back: Vec<Q> = (-5..0).map(|n| s.evaluate(n).unwrap()).collect();
        let rec = s.recurrence();
        let mut window: Vec<Q> = back;
        for n in 0..s.order() {
            let len = window.len();
            let next: Q = rec.iter().enumerate().map(|(i, c)| c * &window[len - 1 - i]).sum();
            prop_assert_eq!(&next, &s.initials()[n]);
            window.push(next);
        }
    }

    #[test]
    fn rational_spectrum_reconstructs(
        roots in prop::collection::vec((prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2), Just(3)], 1u32..=2), 1..=3),
        init in prop::collection::vec(-4i64..=4, 6),
    ) {
        let mut char_poly = Poly::one();
        let mut seen = Vec::new();
        for (r, e) in roots {
            if seen.contains(&r) {
                continue;
            }
            seen.push(r);
            char_poly = char_poly * Poly::from_coeffs(vec![Q::of(-r), Q::of(1)]).pow(e);
        }
        let d = char_poly.degree().unwrap();
        let rec: Vec<Q> = (1..=d).map(|i| -char_poly.coeff(d - i)).collect();
        let init: Vec<Q> = init[..d].iter().map(|&v| Q::of(v)).collect();
        prop_assume!(init.iter().any(|v| *v != Q::of(0)));
        let s: SeqRef = Arc::new(CFiniteSequence::new("S", rec, init).unwrap());
        let spec = s.rational_spectrum().unwrap();
        for n in 0..2 * d as i64 {
            prop_assert_eq!(spec.evaluate(n), s.evaluate(n).unwrap());
        }
    }
}
