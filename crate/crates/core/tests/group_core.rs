mod common;

use frlab::group::{Letter, Word};
use proptest::prelude::*;

#[test]
fn corpus_loads_with_expected_orders() {
    let expect = [
        ("c2", 2), ("c2_2gen", 2), ("c2c2", 4), ("c2c2_alt", 4), ("c2c4", 8), ("c3", 3), ("c3_2gen", 3),
        ("c3c3", 9), ("c4", 4), ("c4_2gen", 4), ("c5", 5), ("c5_2gen", 5), ("c6", 6), ("c6_2gen", 6),
        ("q8", 8), ("s3", 6),
    ];
    for (name, order) in expect {
        assert_eq!(common::load(name).order(), order, "{name}");
    }
    assert_eq!(common::corpus_names().len(), expect.len());
}

#[test]
fn schreier_generator_count_and_transversal() {
    for pg in common::corpus() {
        let s = pg.schreier();
        let (n, k) = (pg.order(), pg.generator_count());
        assert_eq!(s.generators.len(), n * (k - 1) + 1, "{}", pg.name());
        for (g, t) in s.transversal.iter().enumerate() {
            assert_eq!(pg.evaluate(t).unwrap(), g);
        }
        assert!(s.transversal[0].is_empty());
        for w in &s.generators {
            assert_eq!(pg.evaluate(w).unwrap(), 0, "Schreier generator {w} not in R");
        }
    }
}

fn word_strategy(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..k, any::<bool>()), 0..max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(g, inv)| Letter::new(g, inv))))
}

proptest! {
    #[test]
    fn evaluation_is_a_homomorphism(u in word_strategy(2, 12), v in word_strategy(2, 12)) {
        for name in ["s3", "q8", "c2c4"] {
            let pg = common::load(name);
            let g = pg.group();
            let uv = pg.evaluate(&u.mul(&v)).unwrap();
            prop_assert_eq!(uv, g.mul(pg.evaluate(&u).unwrap(), pg.evaluate(&v).unwrap()));
            prop_assert_eq!(pg.evaluate(&u.inverse()).unwrap(), g.inv(pg.evaluate(&u).unwrap()));
        }
    }

    #[test]
    fn words_stay_reduced(u in word_strategy(3, 20), v in word_strategy(3, 20)) {
        let w = u.mul(&v);
        for pair in w.letters().windows(2) {
            prop_assert_ne!(pair[0], pair[1].inverse());
        }
        prop_assert!(u.mul(&u.inverse()).is_empty());
    }
}
