//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Every comparison is exact; the constants below pin the ranges swept.

mod common;

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frlab::freering::stabilized_quotient;
use frlab::frlang::{
    evaluate_query, functor_power, kuzmin_poly, parse, parse_module_pattern, parse_pattern, parse_query, rule_base, translate, Bindings,
    Functor, Hypothesis, Pattern, Ring,
};
use frlab::gmodule::{koszul_complex, GroupRef, KoszulVariant};
use frlab::homology::{group_homology, homology_range, Coefficients, ResolutionKind};
use frlab::linalg::{rank, Matrix};
use frlab::relmod::{hopf_h2, relation_module};
use frlab::{AbelianInvariants, Caps, GModule, IntMatrix, PresentedGroup, SmallMatrix};

/// Cyclic orders and top degree for the closed-form homology check.
const CYCLIC_ORDERS: std::ops::RangeInclusive<usize> = 2..=6;
const CYCLIC_TOP_DEGREE: usize = 6;
/// Truncation range for the stabilized Hopf quotient.
const HOPF_L_MIN: usize = 4;
const HOPF_L_MAX: usize = 10;
/// Koszul samples, largest middle rank and top degree.
const KOSZUL_SAMPLES: usize = 20;
const KOSZUL_MAX_RANK: usize = 4;
const KOSZUL_TOP: usize = 3;
const KOSZUL_SEED: u64 = 20_240_601;
/// Functor ranks are checked for rank r ≤ 5 and degree n ≤ 4.
const FUNCTOR_MAX_RANK: usize = 5;
const FUNCTOR_MAX_DEGREE: usize = 4;
/// Hartley bound: k ≤ 3; n ∈ {2, 3}.
const HARTLEY_TOP: usize = 3;
/// Kuz'min sweep: n ≤ 50, p ≤ 7.
const KUZMIN_MAX_N: u64 = 50;
const KUZMIN_PRIMES: [u64; 4] = [2, 3, 5, 7];
/// Parameter grid for instantiating rule patterns in the gate sweep.
const GATE_PARAMETERS: std::ops::RangeInclusive<i64> = 0..=5;
const GATE_INSTANCES_PER_RULE: usize = 2;

type Check = Result<(), String>;

fn group(name: &str) -> GroupRef {
    Arc::new(common::load(name))
}

fn corpus() -> Vec<GroupRef> {
    common::corpus().into_iter().map(Arc::new).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: frlab::Error) -> String {
    e.to_string()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn necklaces(r: usize, n: usize) -> usize {
    let mu = |mut m: usize| -> i64 {
        let mut out = 1;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                out = -out;
            }
            p += 1;
        }
        if m > 1 {
            -out
        } else {
            out
        }
    };
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mu(d) * (r as i64).pow((n / d) as u32)).sum();
    (s / n as i64) as usize
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|q| (2..*q).all(|d| q % d != 0)).collect()
}

fn homology_ground_truth() -> Check {
    let caps = Caps::default();
    for m in CYCLIC_ORDERS {
        let pg = Arc::new(PresentedGroup::cyclic(m, &caps).map_err(err)?);
        let expect: Vec<AbelianInvariants> = (0..=CYCLIC_TOP_DEGREE)
            .map(|n| match n {
                0 => AbelianInvariants::free(1),
                n if n % 2 == 1 => AbelianInvariants::cyclic(m as i64),
                _ => AbelianInvariants::zero(),
            })
            .collect();
        for kind in [ResolutionKind::Bar, ResolutionKind::Periodic, ResolutionKind::Gruenberg] {
            let h = homology_range(&GModule::trivial(pg.clone()), CYCLIC_TOP_DEGREE, kind, &caps).map_err(err)?;
            ensure(h == expect, || format!("C_{m} via {kind:?}: {h:?}"))?;
        }
    }
    Ok(())
}

fn hopf_formula() -> Check {
    let caps = Caps::default();
    for pg in corpus() {
        let bar = homology_range(&GModule::trivial(pg.clone()), 2, ResolutionKind::Bar, &caps).map_err(err)?;
        let hopf = hopf_h2(&pg).map_err(err)?;
        ensure(hopf == bar[2], || format!("{}: relation module {hopf}, bar {}", pg.name(), bar[2]))?;
    }
    // Presentation independence.
    for (a, b) in [("c2c2", "c2c2_alt"), ("c6", "c6_2gen")] {
        ensure(hopf_h2(&group(a)).map_err(err)? == hopf_h2(&group(b)).map_err(err)?, || format!("{a} vs {b}"))?;
    }
    Ok(())
}

fn saturation() -> Check {
    let caps = Caps::default();
    let num = parse("r ∩ f f").map_err(err)?;
    let den = parse("r f + f r").map_err(err)?;
    for (name, expect) in [("c2c2", AbelianInvariants::cyclic(2)), ("c3", AbelianInvariants::zero()), ("c4", AbelianInvariants::zero())] {
        let rep = stabilized_quotient(&num, &den, &group(name), HOPF_L_MIN, HOPF_L_MAX, &caps).map_err(err)?;
        ensure(rep.stable, || format!("{name}: UNSTABLE {:?}", rep.levels))?;
        ensure(rep.value.as_ref() == Some(&expect), || format!("{name}: {:?} != {expect}", rep.value))?;
    }
    Ok(())
}

fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> (SmallMatrix, SmallMatrix) {
    // Keep the conjugated actions well inside i64 once functor powers are taken.
    loop {
        let (u, v) = elementary_product(rng, n);
        if u.entries().iter().chain(v.entries()).all(|x| x.abs() <= 12) {
            return (u, v);
        }
    }
}

fn elementary_product(rng: &mut ChaCha8Rng, n: usize) -> (SmallMatrix, SmallMatrix) {
    let (mut u, mut v) = (Matrix::<i64>::identity(n), Matrix::<i64>::identity(n));
    if n < 2 {
        return (u, v);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = rng.gen_range(-2i64..=2);
        for k in 0..n {
            u[(i, k)] += c * u[(j, k)];
            v[(k, j)] -= c * v[(k, i)];
        }
    }
    (u, v)
}

fn random_sequence(rng: &mut ChaCha8Rng) -> (IntMatrix, GModule, GModule, IntMatrix) {
    let m = rng.gen_range(2..=3usize);
    let pg = Arc::new(PresentedGroup::cyclic(m, &Caps::default()).unwrap());
    let pick = |k: usize| match k {
        0 => GModule::trivial(pg.clone()),
        1 => GModule::augmentation_ideal(pg.clone()).unwrap(),
        _ => GModule::regular(pg.clone()).unwrap(),
    };
    let (b, c, incl, proj) = if rng.gen_bool(0.5) {
        // g ↪ ZG ↠ Z.
        let b = GModule::regular(pg.clone()).unwrap();
        let mut incl = Matrix::<i64>::zeros(m, m - 1);
        for x in 1..m {
            incl[(x, x - 1)] = 1;
            incl[(0, x - 1)] = -1;
        }
        (b, GModule::trivial(pg.clone()), incl, Matrix::from_rows(vec![vec![1; m]]))
    } else {
        loop {
            let (a, c) = (pick(rng.gen_range(0..3)), pick(rng.gen_range(0..3)));
            if a.rank() + c.rank() > KOSZUL_MAX_RANK {
                continue;
            }
            let (ar, cr) = (a.rank(), c.rank());
            let mut incl = Matrix::<i64>::zeros(ar + cr, ar);
            let mut proj = Matrix::<i64>::zeros(cr, ar + cr);
            for i in 0..ar {
                incl[(i, i)] = 1;
            }
            for i in 0..cr {
                proj[(i, ar + i)] = 1;
            }
            break (a.direct_sum(&c).unwrap(), c, incl, proj);
        }
    };
    let (u, v) = unimodular(rng, b.rank());
    let gens = (0..pg.generator_count()).map(|g| &(&u * b.generator_action(g)) * &v).collect();
    let b = GModule::from_generator_actions(pg, gens).unwrap();
    ((&u * &incl).to_big(), b, c, (&proj * &v).to_big())
}

fn koszul() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(KOSZUL_SEED);
    for sample in 0..KOSZUL_SAMPLES {
        let (incl, b, c, proj) = random_sequence(&mut rng);
        for n in 1..=KOSZUL_TOP {
            for variant in [KoszulVariant::ExSym, KoszulVariant::DivEx] {
                let k = koszul_complex(&incl, &b, &c, &proj, n, variant).map_err(|e| format!("sample {sample}, {variant:?}, n={n}: {e}"))?;
                k.check_exact().map_err(|e| format!("sample {sample}, {variant:?}, n={n}: {e}"))?;
                // Rank count: ker d_i = im d_{i-1} and the last map is onto.
                for (i, d) in k.maps.iter().enumerate() {
                    let incoming = if i == 0 { 0 } else { rank(&k.maps[i - 1]) };
                    ensure(k.terms[i].rank() - rank(d) == incoming, || format!("sample {sample}, {variant:?}, n={n}, term {i}"))?;
                }
                let last = k.maps.last().unwrap();
                ensure(rank(last) == k.terms.last().unwrap().rank(), || format!("sample {sample}: not onto"))?;
            }
        }
    }
    Ok(())
}

fn functor_ranks() -> Check {
    let pg = group("c2");
    for r in 1..=FUNCTOR_MAX_RANK {
        let mut m = GModule::trivial(pg.clone());
        for _ in 1..r {
            m = m.direct_sum(&GModule::trivial(pg.clone())).map_err(err)?;
        }
        for n in 1..=FUNCTOR_MAX_DEGREE {
            let got = [
                m.tensor_power(n).map_err(err)?.rank(),
                m.sym_power(n).map_err(err)?.rank(),
                m.ext_power(n).map_err(err)?.rank(),
                m.div_power(n).map_err(err)?.rank(),
                m.lie_power(n, false).map_err(err)?.rank(),
            ];
            let want = [r.pow(n as u32), binom(r + n - 1, n), binom(r, n), binom(r + n - 1, n), necklaces(r, n)];
            ensure(got == want, || format!("r={r} n={n}: {got:?} != {want:?}"))?;
        }
    }
    for pg in corpus() {
        let rm = relation_module(&pg).map_err(err)?;
        let lie = functor_power(&rm.module, Functor::Lie, 2).map_err(err)?.coinvariants().invariants;
        let ext = rm.module.ext_power(2).map_err(err)?.coinvariants().invariants;
        ensure(lie == ext, || format!("{}: Lie^2 {lie} vs Ex^2 {ext}", pg.name()))?;
    }
    Ok(())
}

fn hartley() -> Check {
    let caps = Caps::default();
    for name in ["c2c2", "c4", "c6", "s3"] {
        let g = GModule::augmentation_ideal(group(name)).map_err(err)?;
        for n in [2usize, 3] {
            let bound = BigInt::from(2 * n * (n - 1));
            let h = homology_range(&g.sym_power(n).map_err(err)?, HARTLEY_TOP, ResolutionKind::Reduced, &caps).map_err(err)?;
            for (k, x) in h.iter().enumerate() {
                let e = x.torsion_part().torsion_exponent();
                ensure((&bound % &e).is_zero(), || format!("{name}: H_{k}(S^{n} g) = {x}, exponent {e} does not divide {bound}"))?;
            }
        }
    }
    Ok(())
}

fn torsionless_vanishing() -> Check {
    let caps = Caps::default();
    for name in ["c3_2gen", "c3c3"] {
        let pg = group(name);
        ensure(pg.generator_count() == 2, || format!("{name} should have two generators"))?;
        let lie = relation_module(&pg).map_err(err)?.module.lie_power(2, false).map_err(err)?;
        let triv = GModule::trivial(pg.clone());
        let values = [
            lie.coinvariants().invariants.torsion_part(),
            group_homology(&triv, 4, Coefficients::Mod(2), &caps).map_err(err)?,
            group_homology(&lie, 1, Coefficients::Integers, &caps).map_err(err)?,
            group_homology(&triv, 5, Coefficients::Mod(2), &caps).map_err(err)?,
        ];
        ensure(values.iter().all(AbelianInvariants::is_zero), || format!("{name}: {values:?}"))?;
    }
    let pg = group("c2_2gen");
    let lie = relation_module(&pg).map_err(err)?.module.lie_power(3, false).map_err(err)?;
    let t = lie.coinvariants().invariants.torsion_part();
    let h = group_homology(&GModule::trivial(pg.clone()), 4, Coefficients::Mod(3), &caps).map_err(err)?;
    ensure(t.is_zero() && h.is_zero(), || format!("c2_2gen: {t}, {h}"))
}

fn kuzmin_oracle(n: u64, p: u64) -> Vec<u64> {
    let mut out = match n % p {
        r if r > 1 => vec![],
        _ if n == p => vec![0, 0, 1],
        1 => {
            let f = kuzmin_oracle(n - 1, p);
            if f.is_empty() {
                f
            } else {
                [vec![0], f].concat()
            }
        }
        _ => {
            let a = kuzmin_oracle(n - p, p);
            let b = kuzmin_oracle(n / p, p);
            let a = if a.is_empty() { a } else { [vec![0, 0], a].concat() };
            (0..a.len().max(b.len())).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()
        }
    };
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn kuzmin() -> Check {
    let poly = |n, p| kuzmin_poly(n, p).map_err(err);
    for p in KUZMIN_PRIMES {
        ensure(poly(p, p)? == [0, 0, 1], || format!("f_{p}^({p})"))?;
        ensure(poly(p + 1, p)? == [0, 0, 0, 1], || format!("f_{}^({p})", p + 1))?;
    }
    ensure(poly(6, 3)? == [0, 0, 0, 0, 1], || "f_6^(3)".into())?;
    ensure(poly(9, 3)? == [0, 0, 1, 0, 0, 0, 1], || "f_9^(3)".into())?;
    for p in KUZMIN_PRIMES {
        for n in 2..=KUZMIN_MAX_N {
            let f = poly(n, p)?;
            ensure(f.is_empty() == (n % p != 0 && n % p != 1), || format!("vanishing law fails for f_{n}^({p})"))?;
            ensure(f == kuzmin_oracle(n, p), || format!("f_{n}^({p}) = {f:?}"))?;
        }
    }
    Ok(())
}

fn tor_oracle(a: &AbelianInvariants) -> AbelianInvariants {
    let orders: Vec<BigInt> = a.torsion.iter().flat_map(|x| a.torsion.iter().map(move |y| x.gcd(y))).collect();
    AbelianInvariants::from_cyclic_orders(0, &orders)
}

fn rule_base_integrity() -> Check {
    for rule in rule_base() {
        let ok = match &rule.pattern {
            Pattern::Code(c) => parse_pattern(&c.to_string()).ok().as_ref() == Some(c),
            Pattern::Module(m) => parse_module_pattern(&m.to_string()).ok().as_ref() == Some(m),
        };
        ensure(ok, || format!("{} does not round-trip", rule.id))?;
    }
    let rows = [
        ("r_3 f + f r_3", Ring::Integers, "H_4(G; Z/3)"),
        ("r_4 f + f r_4", Ring::Integers, "H_6(G; Z/2)"),
        ("s^3 f + f s^3", Ring::Inverted(2), "f_6^(3) H_6(G; Z/3)"),
        ("s^4 + f s^3 f", Ring::Inverted(2), "f_7^(3) H_7(G; Z/3)"),
        ("s^3 f + f s^3", Ring::Local(3), "H_10(G; Z/3)"),
        ("s^3 f + f s^2 f", Ring::Local(5), "H_7(G; Z/5)"),
        ("s^5 + f s^4 f", Ring::Local(3), "H_11(G; Z/3) ⊕ H_15(G; Z/3)"),
    ];
    for (k, (code, ring, rhs)) in rows.iter().enumerate() {
        let t = translate(&parse(code).map_err(err)?, 1, *ring);
        let got: Vec<String> = t.iter().map(|t| t.rhs.to_string()).collect();
        ensure(got == [rhs.to_string()], || format!("row {}: {got:?}", k + 1))?;
    }
    let caps = Caps::default();
    for (name, pinned) in [("c6", vec![6i64]), ("c2c4", vec![2, 2, 2, 4])] {
        let pg = group(name);
        let oracle = tor_oracle(&pg.presentation().abelianization());
        ensure(oracle == AbelianInvariants::from_i64(0, &pinned), || format!("{name}: gcd oracle {oracle}"))?;
        for code in ["(f f + r)^2", "f f f + r r"] {
            let ev = evaluate_query(&parse_query(code).map_err(err)?, 1, Ring::Integers, &pg, &caps).map_err(err)?;
            ensure(ev.value.as_ref() == Some(&oracle), || format!("{code} on {name}: {:?}", ev.value))?;
        }
    }
    Ok(())
}

fn assignments(vars: &[String]) -> Vec<Bindings> {
    let mut out = vec![Bindings::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|b| {
                GATE_PARAMETERS.map(move |x| {
                    let mut b = b.clone();
                    b.insert(v.clone(), x);
                    b
                })
            })
            .collect();
    }
    out.sort_by_key(|b| (b.values().sum::<i64>(), b.values().copied().collect::<Vec<_>>()));
    out
}

fn hypothesis_gate() -> Check {
    let caps = Caps::default();
    let groups = corpus();
    let mut refusals = 0;
    for rule in rule_base() {
        if !rule.hypotheses.iter().any(|h| matches!(h, Hypothesis::PrimeTorsionless(_) | Hypothesis::FactorialTorsionless(_))) {
            continue;
        }
        let vars: Vec<String> = rule.parameters().into_iter().collect();
        let instances: Vec<_> = assignments(&vars).into_iter().filter_map(|b| rule.instance(&b).map(|i| (b, i))).take(GATE_INSTANCES_PER_RULE).collect();
        ensure(!instances.is_empty(), || format!("{}: no instance in the parameter grid", rule.id))?;
        for (b, (q, ring, i)) in &instances {
            for pg in &groups {
                let order = pg.order() as u64;
                let violated = rule.hypotheses.iter().any(|h| match h {
                    Hypothesis::PrimeTorsionless(e) => e.eval_nat(b).is_some_and(|p| order % p == 0),
                    Hypothesis::FactorialTorsionless(e) => e.eval_nat(b).is_some_and(|n| primes_up_to(n).iter().any(|p| order % p == 0)),
                    _ => false,
                });
                if !violated {
                    continue;
                }
                let ev = match evaluate_query(q, *i, *ring, pg, &caps) {
                    Err(e) if e.is_cap() => continue,
                    other => other.map_err(err)?,
                };
                let outcome = ev.outcomes.iter().find(|o| o.id == rule.id);
                ensure(outcome.is_some_and(|o| !o.failed_hypotheses.is_empty()), || format!("false acceptance: {} ({q}) on {}", rule.id, pg.name()))?;
                refusals += 1;
            }
        }
    }
    ensure(refusals > 0, || "no violating evaluation ran".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("homology ground truth for cyclic groups", homology_ground_truth),
        ("Hopf formula on the corpus", hopf_formula),
        ("stabilized Hopf quotient", saturation),
        ("Koszul exactness", koszul),
        ("functor ranks and Lie^2 = Ex^2 coinvariants", functor_ranks),
        ("Hartley exponent bound", hartley),
        ("torsionless vanishing", torsionless_vanishing),
        ("Kuz'min polynomials", kuzmin),
        ("rule base integrity", rule_base_integrity),
        ("hypothesis gate", hypothesis_gate),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.1}s)", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {e}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
