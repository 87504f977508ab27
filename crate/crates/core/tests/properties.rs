//! Randomized cross-checks: text round trips for the three polynomial
//! types, the recursive against the closed forms of f and g, the
//! reflection identity linking them, the ab/cd change of basis, and the
//! coalgebra laws on random words.

use cdindex::{
    ab_to_cd, cd_to_ab, coproduct, coproduct_word, counit, f_closed, f_map, g_closed, g_map, q_int,
    CommMono, CommPoly, Letter, MixedPoly, MixedWord, NCPoly, Tensor, Word, Q,
};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Q> {
    (1i64..=9, 1i64..=4, proptest::bool::ANY).prop_map(|(n, d, neg)| {
        let q = q_int(n) / q_int(d);
        if neg {
            -q
        } else {
            q
        }
    })
}

fn cd_letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::C), Just(Letter::D)]
}

fn ab_letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::A), Just(Letter::B)]
}

fn free_letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        Just(Letter::A),
        Just(Letter::B),
        Just(Letter::C),
        Just(Letter::D)
    ]
}

fn word_over(letter: impl Strategy<Value = Letter>, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter, 0..=max_len).prop_map(Word::from_letters)
}

fn ncpoly() -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((word_over(free_letter(), 5), coeff()), 0..=4).prop_map(|terms| {
        let mut p = NCPoly::zero();
        for (w, q) in terms {
            p.add_term(w, q);
        }
        p
    })
}

fn mixed_word() -> impl Strategy<Value = MixedWord> {
    let primed = prop::collection::vec(prop_oneof![Just(Letter::Cp), Just(Letter::Dp)], 0..=3);
    let unprimed = prop::collection::vec(cd_letter(), 0..=3);
    (primed, unprimed, proptest::bool::ANY).prop_map(|(p, u, e)| {
        let unprimed = if e { Vec::new() } else { u };
        MixedWord::new(Word::from_letters(p), Word::from_letters(unprimed), e)
            .expect("generated mixed words are well formed")
    })
}

fn mixedpoly() -> impl Strategy<Value = MixedPoly> {
    prop::collection::vec((mixed_word(), coeff()), 0..=4).prop_map(|terms| {
        let mut p = MixedPoly::zero();
        for (w, q) in terms {
            p.add_term(w, q);
        }
        p
    })
}

fn commpoly() -> impl Strategy<Value = CommPoly> {
    let mono = (0u32..=4, 0u32..=4, 0u32..=4, 0u32..=4).prop_map(|(t, tp, u, up)| CommMono {
        t,
        tp,
        u,
        up,
    });
    prop::collection::vec((mono, coeff()), 0..=4).prop_map(|terms| {
        let mut p = CommPoly::zero();
        for (m, q) in terms {
            p.add_term(m, q);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ncpoly_text_round_trips(p in ncpoly()) {
        let back = NCPoly::parse(&p.to_string()).expect("canonical text parses");
        prop_assert!(back.sub(&p).is_zero());
    }

    #[test]
    fn mixedpoly_text_round_trips(p in mixedpoly()) {
        let back = MixedPoly::parse(&p.to_string()).expect("canonical text parses");
        prop_assert!(back.sub(&p).is_zero());
    }

    #[test]
    fn commpoly_text_round_trips(p in commpoly()) {
        let back = CommPoly::parse(&p.to_string()).expect("canonical text parses");
        prop_assert!(back.sub(&p).is_zero());
    }

    #[test]
    fn f_recursion_matches_closed_form(w in word_over(cd_letter(), 5)) {
        let closed = f_closed(&w);
        prop_assert!(f_map(&NCPoly::from_word(w)).sub(&closed).is_zero());
    }

    #[test]
    fn g_recursion_matches_closed_form(w in word_over(cd_letter(), 5)) {
        let closed = g_closed(&w);
        prop_assert!(g_map(&NCPoly::from_word(w)).sub(&closed).is_zero());
    }

    #[test]
    fn reflection_identity_links_f_and_g(w in word_over(cd_letter(), 5)) {
        let p = NCPoly::from_word(w);
        let f = f_map(&p);
        let g = g_map(&p);
        let mut u_minus_t = CommPoly::from_mono(CommMono { t: 0, tp: 0, u: 1, up: 0 }, q_int(1));
        u_minus_t.add_term(CommMono { t: 1, tp: 0, u: 0, up: 0 }, q_int(-1));
        let lhs = u_minus_t.mul(&f);
        let rhs = g.sub(&g.bar());
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn ab_cd_change_of_basis_round_trips(terms in prop::collection::vec(
        (word_over(cd_letter(), 5), coeff()),
        0..=4,
    )) {
        let mut p = NCPoly::zero();
        for (w, q) in terms {
            p.add_term(w, q);
        }
        let (cd, remainder, e_coeff) = ab_to_cd(&cd_to_ab(&p)).expect("pure cd input");
        prop_assert!(cd.sub(&p).is_zero());
        prop_assert!(remainder.is_zero());
        prop_assert_eq!(e_coeff, q_int(0));
    }

    #[test]
    fn coproduct_is_coassociative(w in word_over(ab_letter(), 7)) {
        let mut left: Tensor<(Word, Word), Word> = Tensor::zero();
        let mut right: Tensor<(Word, Word), Word> = Tensor::zero();
        for ((x, y), q) in coproduct_word(&w).terms() {
            for ((x1, x2), r) in coproduct_word(x).terms() {
                left.add_term((x1.clone(), x2.clone()), y.clone(), q * r);
            }
            for ((y1, y2), r) in coproduct_word(y).terms() {
                right.add_term((x.clone(), y1.clone()), y2.clone(), q * r);
            }
        }
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn counit_laws_hold(w in word_over(ab_letter(), 7)) {
        let p = NCPoly::from_word(w.clone());
        let mut left = NCPoly::zero();
        let mut right = NCPoly::zero();
        for ((x, y), q) in coproduct(&p).terms() {
            left.add_term(y.clone(), q * counit(&NCPoly::from_word(x.clone())));
            right.add_term(x.clone(), q * counit(&NCPoly::from_word(y.clone())));
        }
        prop_assert!(left.sub(&p).is_zero());
        prop_assert!(right.sub(&p).is_zero());
    }
}
