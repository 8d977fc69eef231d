mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use frlab::frlang::{
    evaluate_query, kuzmin_poly, normalize, parse, parse_module_pattern, parse_pattern, parse_query, rule_base, translate, EvalStatus,
    Hypothesis, Pattern, Ring,
};
use frlab::{AbelianInvariants, Caps};

/// Textbook recursion, no memo, coefficients lowest degree first.
fn kuzmin_oracle(n: u64, p: u64) -> Vec<u64> {
    let add = |a: Vec<u64>, b: Vec<u64>| {
        let mut s = vec![0; a.len().max(b.len())];
        for (i, c) in a.iter().enumerate() {
            s[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            s[i] += c;
        }
        s
    };
    let shift = |a: Vec<u64>, k: usize| if a.is_empty() { a } else { [vec![0; k], a].concat() };
    let out = match n % p {
        r if r > 1 => vec![],
        _ if n == p => vec![0, 0, 1],
        1 => shift(kuzmin_oracle(n - 1, p), 1),
        _ => add(shift(kuzmin_oracle(n - p, p), 2), kuzmin_oracle(n / p, p)),
    };
    let mut out = out;
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Tor(A, B) for finite A, B from invariant factors.
fn tor_oracle(a: &AbelianInvariants, b: &AbelianInvariants) -> AbelianInvariants {
    let orders: Vec<BigInt> = a.torsion.iter().flat_map(|x| b.torsion.iter().map(move |y| x.gcd(y))).collect();
    AbelianInvariants::from_cyclic_orders(0, &orders)
}

#[test]
fn kuzmin_values() {
    for p in [2, 3, 5, 7] {
        assert_eq!(kuzmin_poly(p, p).unwrap(), vec![0, 0, 1]);
        assert_eq!(kuzmin_poly(p + 1, p).unwrap(), vec![0, 0, 0, 1]);
    }
    assert_eq!(kuzmin_poly(6, 3).unwrap(), vec![0, 0, 0, 0, 1]);
    assert_eq!(kuzmin_poly(9, 3).unwrap(), vec![0, 0, 1, 0, 0, 0, 1]);
    assert!(kuzmin_poly(1, 3).is_err());
    assert!(kuzmin_poly(5, 4).is_err());
}

#[test]
fn kuzmin_vanishing_law() {
    for p in [2, 3, 5, 7] {
        for n in 2..=50 {
            let f = kuzmin_poly(n, p).unwrap();
            assert_eq!(f.is_empty(), n % p != 0 && n % p != 1, "f_{n}^({p})");
            assert_eq!(f, kuzmin_oracle(n, p), "f_{n}^({p})");
        }
    }
}

#[test]
fn every_rule_pattern_round_trips() {
    for rule in rule_base() {
        match &rule.pattern {
            Pattern::Code(c) => assert_eq!(&parse_pattern(&c.to_string()).unwrap(), c, "{}", rule.id),
            Pattern::Module(m) => assert_eq!(&parse_module_pattern(&m.to_string()).unwrap(), m, "{}", rule.id),
        }
    }
}

#[test]
fn table_rows_translate() {
    let rows = [
        ("r_3 f + f r_3", Ring::Integers, "H_4(G; Z/3)"),
        ("r_4 f + f r_4", Ring::Integers, "H_6(G; Z/2)"),
        ("s^3 f + f s^3", Ring::Inverted(2), "f_6^(3) H_6(G; Z/3)"),
        ("s^4 + f s^3 f", Ring::Inverted(2), "f_7^(3) H_7(G; Z/3)"),
        ("s^3 f + f s^3", Ring::Local(3), "H_10(G; Z/3)"),
        ("s^3 f + f s^2 f", Ring::Local(5), "H_7(G; Z/5)"),
        ("s^5 + f s^4 f", Ring::Local(3), "H_11(G; Z/3) ⊕ H_15(G; Z/3)"),
    ];
    for (code, ring, rhs) in rows {
        let t = translate(&parse(code).unwrap(), 1, ring);
        let found: Vec<String> = t.iter().map(|t| t.rhs.to_string()).collect();
        assert_eq!(found, vec![rhs.to_string()], "{code} over {ring:?}");
    }
}

#[test]
fn unknown_codes_have_no_rule() {
    let caps = Caps::default();
    let pg = Arc::new(common::load("c3"));
    let ev = evaluate_query(&parse_query("r_3 r_5 + f r_2").unwrap(), 2, Ring::Integers, &pg, &caps).unwrap();
    assert_eq!(ev.status, EvalStatus::NoRule);
}

#[test]
fn pavutnitskiy_pair_gives_tor() {
    let caps = Caps::default();
    for name in ["c6", "c2c4", "c2c2", "c3c3"] {
        let pg = Arc::new(common::load(name));
        let ab = pg.presentation().abelianization();
        let expect = tor_oracle(&ab, &ab);
        for code in ["(f f + r)^2", "f f f + r r"] {
            let ev = evaluate_query(&parse_query(code).unwrap(), 1, Ring::Integers, &pg, &caps).unwrap();
            assert_eq!(ev.status, EvalStatus::Ok, "{code} on {name}");
            assert_eq!(ev.value.as_ref(), Some(&expect), "{code} on {name}");
            assert!(ev.check_failures.is_empty(), "{:?}", ev.check_failures);
        }
    }
    assert_eq!(tor_oracle(&AbelianInvariants::from_i64(0, &[2, 4]), &AbelianInvariants::from_i64(0, &[2, 4])), AbelianInvariants::from_i64(0, &[2, 2, 2, 4]));
}

fn code_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("f".to_string()), Just("r".to_string()), Just("s".to_string()), (2u64..6).prop_map(|m| format!("r_{m}"))];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), 1u64..4).prop_map(|(c, e)| format!("({c})^{e}")),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| v.join(" ")),
            prop::collection::vec(inner.clone(), 2..4).prop_map(|v| format!("({})", v.join(" + "))),
            prop::collection::vec(inner, 2..3).prop_map(|v| format!("({})", v.join(" ∩ "))),
        ]
    })
}

proptest! {
    #[test]
    fn parse_print_round_trip(text in code_text()) {
        let c = parse(&text).unwrap();
        let printed = c.to_string();
        prop_assert_eq!(&parse(&printed).unwrap(), &c);
        prop_assert_eq!(parse(&printed).unwrap().to_string(), printed);
    }

    #[test]
    fn normalize_is_idempotent(text in code_text()) {
        let c = parse(&text).unwrap();
        prop_assert_eq!(&normalize(&c), &c);
        prop_assert_eq!(normalize(&normalize(&c)), normalize(&c));
    }

    #[test]
    fn kuzmin_matches_recursion(n in 2u64..120, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        prop_assert_eq!(kuzmin_poly(n, p).unwrap(), kuzmin_oracle(n, p));
    }

    #[test]
    fn torsion_gates_are_sound(k in 0usize..16, r in 0usize..64, p in 2i64..4) {
        // A rule that fires must have every torsion hypothesis satisfied by |G|.
        let names = common::corpus_names();
        let pg = Arc::new(common::load(&names[k]));
        let gated: Vec<_> = rule_base()
            .iter()
            .filter(|r| r.hypotheses.iter().any(|h| matches!(h, Hypothesis::PrimeTorsionless(_) | Hypothesis::FactorialTorsionless(_))))
            .collect();
        let rule = gated[r % gated.len()];
        let b = rule.parameters().into_iter().map(|v| (v, p)).collect();
        if let Some((q, ring, i)) = rule.instance(&b) {
            let caps = Caps::default();
            let ev = evaluate_query(&q, i, ring, &pg, &caps);
            prop_assert!(ev.as_ref().map_or_else(|e| e.is_cap(), |_| true), "{} {:?} i={}: {:?}", q, ring, i, ev.as_ref().err());
            if let Ok(ev) = ev {
                let order = pg.order() as u64;
                let primes = |n: u64| (2..=n).filter(|q| (2..*q).all(|d| q % d != 0)).collect::<Vec<_>>();
                let violated = rule.hypotheses.iter().any(|h| match h {
                    Hypothesis::PrimeTorsionless(e) => e.eval_nat(&b).is_some_and(|p| order % p == 0),
                    Hypothesis::FactorialTorsionless(e) => e.eval_nat(&b).is_some_and(|n| primes(n).iter().any(|q| order % q == 0)),
                    _ => false,
                });
                if let Some(o) = ev.outcomes.iter().find(|o| o.id == rule.id) {
                    prop_assert_eq!(o.failed_hypotheses.is_empty(), !violated, "{} on {}", q, pg.name());
                }
            }
        }
    }
}
