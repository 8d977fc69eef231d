mod common;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use frlab::freering::{code_span, describe, stabilized_quotient, truncated_quotient, words_up_to, FreeRingElement, MapEvaluator, WordContext};
use frlab::frlang::parse;
use frlab::linalg::Matrix;
use frlab::relmod::hopf_h2;
use frlab::{AbelianInvariants, Caps, Error, Lattice, PresentedGroup, Word};

const SMALL: [&str; 6] = ["c2", "c3", "c4", "c2_2gen", "c2c2", "c3_2gen"];

fn coordinates(elements: &[FreeRingElement], words: &HashMap<Word, usize>) -> Lattice {
    let cols: Vec<Vec<BigInt>> = elements
        .iter()
        .map(|e| {
            let mut v = vec![BigInt::zero(); words.len()];
            for (w, c) in e.terms() {
                v[words[w]] += c;
            }
            v
        })
        .collect();
    Lattice::from_columns(&Matrix::from_columns(words.len(), &cols))
}

fn word_index(k: usize, level: usize) -> HashMap<Word, usize> {
    words_up_to(k, level).into_iter().enumerate().map(|(i, w)| (w, i)).collect()
}

#[test]
fn fox_calculus_example() {
    // x^2 - 1 = (x + 1)(x - 1).
    let x = FreeRingElement::word(Word::generator(0));
    let one = FreeRingElement::one();
    let x2 = FreeRingElement::word(Word::power_of(0, 2));
    assert_eq!(x2.sub(&one), x.add(&one).mul(&x.sub(&one)));
    assert_eq!(x.involution(), FreeRingElement::word(Word::power_of(0, -1)));
    assert_eq!(x2.sub(&one).augmentation(), BigInt::zero());
}

#[test]
fn hopf_quotient_matches_relation_module() {
    let caps = Caps::default();
    for name in ["c2", "c3", "c4", "c5", "c2c2", "c2c2_alt", "c6", "c3_2gen"] {
        let pg = Arc::new(common::load(name));
        let rep = stabilized_quotient(&parse("r ∩ f f").unwrap(), &parse("r f + f r").unwrap(), &pg, 3, 6, &caps).unwrap();
        assert!(rep.stable, "{name}: {:?}", rep.levels);
        assert_eq!(rep.value.as_ref(), Some(&hopf_h2(&pg).unwrap()), "{name}");
    }
}

#[test]
fn magnus_quotients() {
    // f / f^3 has basis x_i - 1 and (x_i - 1)(x_j - 1): Z^{k + k^2}.
    let caps = Caps::default();
    let pg = common::load("c2_2gen");
    let a = truncated_quotient(&parse("f").unwrap(), &parse("f f f").unwrap(), &pg, 4, &caps).unwrap();
    assert_eq!(a, AbelianInvariants::free(2 + 4));
    let rep = stabilized_quotient(&parse("f f").unwrap(), &parse("f f f").unwrap(), &Arc::new(pg), 3, 4, &caps).unwrap();
    assert_eq!(rep.value, Some(AbelianInvariants::free(4)));
}

#[test]
fn unstable_is_reported() {
    // At length 1 the words x - 1, x^-1 - 1 are independent modulo f^3; at
    // length 2 the degree-two part appears.
    let caps = Caps::default();
    let pg = Arc::new(common::load("c2_2gen"));
    let rep = stabilized_quotient(&parse("f").unwrap(), &parse("f f f").unwrap(), &pg, 1, 2, &caps).unwrap();
    assert!(!rep.stable);
    assert_eq!(rep.value, None);
    assert_eq!(rep.levels.len(), 2);
}

#[test]
fn escaping_numerator_is_an_error() {
    let caps = Caps::default();
    let pg = common::load("c3");
    let err = truncated_quotient(&parse("f f").unwrap(), &parse("r").unwrap(), &pg, 4, &caps).unwrap_err();
    assert!(matches!(err, Error::NotContained { .. }), "{err}");
}

#[test]
fn monomial_cap() {
    let caps = Caps { max_monomials: 50, ..Caps::default() };
    let pg = common::load("c2c2");
    let err = code_span(&parse("r").unwrap(), &pg, 6, &caps).unwrap_err();
    assert!(err.is_cap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spans_lie_in_the_ideal(g in 0usize..SMALL.len(), c in 0usize..8, level in 2usize..=5) {
        let codes = ["f", "r", "r_2", "f f", "r f + f r", "r ∩ f f", "f r f", "r_3"];
        let caps = Caps::default();
        let pg = common::load(SMALL[g]);
        let code = parse(codes[c]).unwrap();
        let span = code_span(&code, &pg, level, &caps).unwrap();
        let ctx = WordContext::new(&pg);
        let mut ev = MapEvaluator::new(describe(&code).or_else(|| describe(&parse("r").unwrap())).unwrap());
        for e in &span.elements {
            prop_assert!(e.max_length() <= level);
            prop_assert!(e.augmentation().is_zero());
            if codes[c] != "r_3" {
                prop_assert!(ev.eval_element(&ctx, e).is_empty(), "{} escapes {}", e.support_size(), codes[c]);
            } else {
                prop_assert!(e.project(&pg).unwrap().iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn exact_spans_are_monotone(g in 0usize..SMALL.len(), c in 0usize..4, level in 2usize..=3) {
        let codes = ["f", "r", "r_2", "f + r_2"];
        let caps = Caps::default();
        let pg = common::load(SMALL[g]);
        let code = parse(codes[c]).unwrap();
        let words = word_index(pg.generator_count(), level + 1);
        let low = coordinates(&code_span(&code, &pg, level, &caps).unwrap().elements, &words);
        let high = coordinates(&code_span(&code, &pg, level + 1, &caps).unwrap().elements, &words);
        prop_assert!(high.contains_lattice(&low));
    }

    #[test]
    fn augmentation_span_is_everything_of_degree_zero(g in 0usize..SMALL.len(), level in 1usize..=4) {
        // f ∩ W_L has rank |W_L| - 1.
        let caps = Caps::default();
        let pg = common::load(SMALL[g]);
        let words = word_index(pg.generator_count(), level);
        let l = coordinates(&code_span(&parse("f").unwrap(), &pg, level, &caps).unwrap().elements, &words);
        prop_assert_eq!(l.rank(), words.len() - 1);
    }

    #[test]
    fn group_span_rank(g in 0usize..SMALL.len(), level in 1usize..=4) {
        // r ∩ W_L has rank |W_L| - (number of group elements hit by W_L).
        let caps = Caps::default();
        let pg = common::load(SMALL[g]);
        let all = words_up_to(pg.generator_count(), level);
        let hit: std::collections::BTreeSet<usize> = all.iter().map(|w| pg.evaluate(w).unwrap()).collect();
        let words = word_index(pg.generator_count(), level);
        let l = coordinates(&code_span(&parse("r").unwrap(), &pg, level, &caps).unwrap().elements, &words);
        prop_assert_eq!(l.rank(), words.len() - hit.len());
    }
}

#[test]
fn cyclic_presentation_sanity() {
    let caps = Caps::default();
    let pg = PresentedGroup::cyclic(4, &caps).unwrap();
    let q = truncated_quotient(&parse("r").unwrap(), &parse("r f + f r").unwrap(), &pg, 8, &caps).unwrap();
    // On one generator r / (rf + fr) is Z, spanned by x^4 - 1.
    assert_eq!(q, AbelianInvariants::free(1));
}
