//! The verification suite: one or more checks per acceptance criterion.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use frlab::freering::stabilized_quotient;
use frlab::frlang::{
    self, evaluate_query, kuzmin_poly, parse, parse_module_pattern, parse_pattern, parse_query, rule_base, Functor, Hypothesis,
    Pattern, Ring,
};
use frlab::gmodule::{koszul_complex, GroupRef, KoszulVariant};
use frlab::homology::{group_homology, homology_range, Coefficients, ResolutionKind};
use frlab::linalg::Matrix;
use frlab::relmod::{hopf_h2, relation_module};
use frlab::{AbelianInvariants, Caps, Error, GModule, IntMatrix, PresentedGroup, SmallMatrix};

use crate::{Failure, Settings};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub criterion: u8,
    pub group: String,
    pub expected: String,
    pub computed: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySuiteReport {
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

struct Runner<'a> {
    settings: &'a Settings,
    only: &'a [String],
    timings: bool,
    checks: Vec<CheckResult>,
}

type Outcome = Result<(String, String), Error>;

impl Runner<'_> {
    fn wanted(&self, id: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|p| id.starts_with(p.as_str()))
    }

    /// Runs `f`, which returns (expected, computed); equal strings pass.
    fn check(&mut self, id: &str, criterion: u8, group: &str, f: impl FnOnce() -> Outcome) {
        if !self.wanted(id) {
            return;
        }
        let start = Instant::now();
        let (expected, computed, status) = match f() {
            Ok((e, c)) => {
                let s = if e == c { "pass" } else { "fail" };
                (e, c, s)
            }
            Err(e) => (String::new(), format!("error: {e}"), "error"),
        };
        self.checks.push(CheckResult {
            id: id.to_string(),
            criterion,
            group: group.to_string(),
            expected,
            computed,
            status,
            runtime_ms: self.timings.then(|| start.elapsed().as_millis()),
        });
    }

    fn caps(&self) -> &Caps {
        &self.settings.caps
    }
}

fn corpus(s: &Settings) -> Result<Vec<GroupRef>, Failure> {
    let mut paths: Vec<_> = std::fs::read_dir(&s.corpus)
        .map_err(|e| Failure::from(Error::Io { path: s.corpus.display().to_string(), msg: e.to_string() }))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| Ok(Arc::new(PresentedGroup::from_file(p, &s.caps)?))).collect()
}

fn find<'a>(groups: &'a [GroupRef], name: &str) -> Result<&'a GroupRef, Error> {
    groups
        .iter()
        .find(|g| g.name() == name)
        .ok_or_else(|| Error::Io { path: format!("{name}.json"), msg: "missing from corpus".into() })
}

fn inv(free: usize, torsion: &[i64]) -> AbelianInvariants {
    AbelianInvariants::from_i64(free, torsion)
}

fn show(a: &AbelianInvariants) -> String {
    a.to_string()
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn mobius(n: u64) -> i64 {
    let (mut n, mut mu, mut p) = (n, 1i64, 2u64);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn witt(r: u64, n: u64) -> u64 {
    let s: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (r as i64).pow((n / d) as u32)).sum();
    (s / n as i64) as u64
}

pub fn run(s: &Settings, only: &[String], quick: bool, timings: bool) -> Result<VerifySuiteReport, Failure> {
    let groups = corpus(s)?;
    let mut r = Runner { settings: s, only, timings, checks: Vec::new() };
    homology_ground_truth(&mut r, quick);
    hopf_formula(&mut r, &groups);
    saturation(&mut r, &groups, quick);
    koszul(&mut r, quick);
    functor_ranks(&mut r, &groups);
    hartley(&mut r, &groups);
    torsionless_vanishing(&mut r, &groups);
    kuzmin(&mut r);
    rule_base_integrity(&mut r, &groups);
    hypothesis_gate(&mut r, &groups);
    let failed = r.checks.iter().filter(|c| c.status != "pass").count();
    Ok(VerifySuiteReport { passed: r.checks.len() - failed, failed, pass: failed == 0, checks: r.checks })
}

fn homology_ground_truth(r: &mut Runner, quick: bool) {
    let n_max = if quick { 4 } else { 6 };
    for m in 2..=6usize {
        let expected: Vec<String> = (0..=n_max)
            .map(|n| match n {
                0 => inv(1, &[]),
                n if n % 2 == 1 => inv(0, &[m as i64]),
                _ => inv(0, &[]),
            })
            .map(|a| show(&a))
            .collect();
        for (kind, name) in [(ResolutionKind::Bar, "bar"), (ResolutionKind::Periodic, "periodic"), (ResolutionKind::Gruenberg, "gruenberg")] {
            let caps = r.caps().clone();
            r.check(&format!("homology.cyclic.{name}"), 1, &format!("c{m}"), || {
                let pg = Arc::new(PresentedGroup::cyclic(m, &caps)?);
                let h = homology_range(&GModule::trivial(pg), n_max, kind, &caps)?;
                Ok((expected.join(", "), h.iter().map(show).collect::<Vec<_>>().join(", ")))
            });
        }
    }
}

fn hopf_formula(r: &mut Runner, groups: &[GroupRef]) {
    for g in groups {
        let caps = r.caps().clone();
        r.check("hopf.relmod_vs_bar", 2, g.name(), || {
            let bar = homology_range(&GModule::trivial(g.clone()), 2, ResolutionKind::Bar, &caps)?;
            Ok((show(&bar[2]), show(&hopf_h2(g)?)))
        });
    }
}

fn saturation(r: &mut Runner, groups: &[GroupRef], quick: bool) {
    let l_max = if quick { 7 } else { 10 };
    for (name, expected) in [("c2c2", inv(0, &[2])), ("c3", inv(0, &[])), ("c4", inv(0, &[]))] {
        let caps = r.caps().clone();
        r.check("saturation.hopf", 3, name, || {
            let pg = find(groups, name)?;
            let rep = stabilized_quotient(&parse("r ∩ f f")?, &parse("r f + f r")?, pg, caps.l_min, l_max, &caps)?;
            let computed = match &rep.value {
                Some(v) => show(v),
                None => format!("UNSTABLE {:?}", rep.levels.values().map(show).collect::<Vec<_>>()),
            };
            Ok((show(&expected), computed))
        });
    }
}

/// Unimodular `u` and its inverse from random elementary operations.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> (SmallMatrix, SmallMatrix) {
    // Keep the conjugated actions well inside i64 once functor powers are taken.
    loop {
        let (u, v) = elementary_product(rng, n);
        if u.entries().iter().chain(v.entries()).all(|x| x.abs() <= 12) {
            return (u, v);
        }
    }
}

fn elementary_product(rng: &mut ChaCha8Rng, n: usize) -> (SmallMatrix, SmallMatrix) {
    let mut u = Matrix::<i64>::identity(n);
    let mut v = Matrix::<i64>::identity(n);
    if n < 2 {
        return (u, v);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = rng.gen_range(-2i64..=2);
        // u <- E u with E = I + c e_ij, v <- v E^-1.
        for k in 0..n {
            u[(i, k)] += c * u[(j, k)];
            v[(k, j)] -= c * v[(k, i)];
        }
    }
    (u, v)
}

/// A short exact sequence `A ↪ B ↠ C` of modules over `C_2` or `C_3`, `rank B <= 4`.
pub fn random_sequence(rng: &mut ChaCha8Rng, caps: &Caps) -> Result<(IntMatrix, GModule, GModule, IntMatrix), Error> {
    let m = rng.gen_range(2..=3usize);
    let pg = Arc::new(PresentedGroup::cyclic(m, caps)?);
    let pool = |k: usize| -> Result<GModule, Error> {
        match k {
            0 => Ok(GModule::trivial(pg.clone())),
            1 => GModule::augmentation_ideal(pg.clone()),
            _ => GModule::regular(pg.clone()),
        }
    };
    let (b, c, incl, proj) = if rng.gen_bool(0.5) {
        // g ↪ ZG ↠ Z, possibly plus a trivial summand.
        let extra = rng.gen_bool(0.5) && m == 2;
        let mut b = GModule::regular(pg.clone())?;
        let mut c = GModule::trivial(pg.clone());
        let a_rank = m - 1;
        if extra {
            b = b.direct_sum(&GModule::trivial(pg.clone()))?;
            c = c.direct_sum(&GModule::trivial(pg.clone()))?;
        }
        let mut incl = Matrix::<i64>::zeros(b.rank(), a_rank);
        for x in 1..m {
            incl[(x, x - 1)] = 1;
            incl[(0, x - 1)] = -1;
        }
        let mut proj = Matrix::<i64>::zeros(c.rank(), b.rank());
        for x in 0..m {
            proj[(0, x)] = 1;
        }
        if extra {
            proj[(1, m)] = 1;
        }
        (b, c, incl, proj)
    } else {
        loop {
            let a = pool(rng.gen_range(0..3))?;
            let c = pool(rng.gen_range(0..3))?;
            if a.rank() + c.rank() > 4 {
                continue;
            }
            let b = a.direct_sum(&c)?;
            let (ar, cr) = (a.rank(), c.rank());
            let mut incl = Matrix::<i64>::zeros(ar + cr, ar);
            let mut proj = Matrix::<i64>::zeros(cr, ar + cr);
            for i in 0..ar {
                incl[(i, i)] = 1;
            }
            for i in 0..cr {
                proj[(i, ar + i)] = 1;
            }
            break (b, c, incl, proj);
        }
    };
    let (u, v) = random_unimodular(rng, b.rank());
    let mul = |x: &SmallMatrix, y: &SmallMatrix| x.try_mul(y).map_err(|_| Error::Internal("overflow".into()));
    let gens = (0..pg.generator_count()).map(|g| mul(&mul(&u, b.generator_action(g))?, &v)).collect::<Result<Vec<_>, _>>()?;
    let b2 = GModule::from_generator_actions(pg.clone(), gens)?;
    Ok((mul(&u, &incl)?.to_big(), b2, c, mul(&proj, &v)?.to_big()))
}

fn koszul(r: &mut Runner, quick: bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let samples = if quick { 5 } else { 20 };
    for k in 0..samples {
        let caps = r.caps().clone();
        let seq = random_sequence(&mut rng, &caps);
        r.check("koszul.exact", 4, &format!("sample {k}"), || {
            let (incl, b, c, proj) = seq?;
            for n in 1..=3 {
                for variant in [KoszulVariant::ExSym, KoszulVariant::DivEx] {
                    koszul_complex(&incl, &b, &c, &proj, n, variant)?.check_exact()?;
                }
            }
            Ok(("exact".into(), "exact".into()))
        });
    }
}

fn functor_ranks(r: &mut Runner, groups: &[GroupRef]) {
    let caps = r.caps().clone();
    r.check("functors.ranks", 5, "c2", || {
        let pg = Arc::new(PresentedGroup::cyclic(2, &caps)?);
        let (mut expected, mut computed) = (Vec::new(), Vec::new());
        for rank in 1..=5u64 {
            let mut m = GModule::trivial(pg.clone());
            for _ in 1..rank {
                m = m.direct_sum(&GModule::trivial(pg.clone()))?;
            }
            for n in 1..=4u64 {
                expected.push([rank.pow(n as u32), binom(rank + n - 1, n), binom(rank, n), binom(rank + n - 1, n), witt(rank, n)]);
                let nn = n as usize;
                computed.push([
                    m.tensor_power(nn)?.rank() as u64,
                    m.sym_power(nn)?.rank() as u64,
                    m.ext_power(nn)?.rank() as u64,
                    m.div_power(nn)?.rank() as u64,
                    m.lie_power(nn, false)?.rank() as u64,
                ]);
            }
        }
        Ok((format!("{expected:?}"), format!("{computed:?}")))
    });
    for g in groups {
        r.check("functors.lie2_ext2", 5, g.name(), || {
            let rm = relation_module(g)?;
            let lie = frlang::functor_power(&rm.module, Functor::Lie, 2)?.coinvariants().invariants;
            let ext = rm.module.ext_power(2)?.coinvariants().invariants;
            Ok((show(&ext), show(&lie)))
        });
    }
}

fn torsion_of(a: &AbelianInvariants) -> AbelianInvariants {
    a.torsion_part()
}

fn hartley(r: &mut Runner, groups: &[GroupRef]) {
    for name in ["c2c2", "c4", "c6", "s3"] {
        for n in [2usize, 3] {
            let caps = r.caps().clone();
            let bound = 2 * n * (n - 1);
            r.check(&format!("hartley.S{n}"), 6, name, || {
                let pg = find(groups, name)?;
                let m = GModule::augmentation_ideal(pg.clone())?.sym_power(n)?;
                let h = homology_range(&m, 3, ResolutionKind::Reduced, &caps)?;
                let bad: Vec<String> = h
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| (BigInt::from(bound) % torsion_of(x).torsion_exponent()) != BigInt::from(0))
                    .map(|(k, x)| format!("H_{k} = {x}"))
                    .collect();
                let computed = if bad.is_empty() { format!("exponents divide {bound}") } else { bad.join("; ") };
                Ok((format!("exponents divide {bound}"), computed))
            });
        }
    }
}

fn torsionless_vanishing(r: &mut Runner, groups: &[GroupRef]) {
    let z2 = Coefficients::Mod(2);
    for name in ["c3_2gen", "c3c3"] {
        let caps = r.caps().clone();
        r.check("vanishing.lie2", 7, name, || {
            let pg = find(groups, name)?;
            let lie = relation_module(pg)?.module.lie_power(2, false)?;
            let t0 = lie.coinvariants().invariants.torsion_part();
            let h1 = group_homology(&lie, 1, Coefficients::Integers, &caps)?;
            let triv = GModule::trivial(pg.clone());
            let h4 = group_homology(&triv, 4, z2, &caps)?;
            let h5 = group_homology(&triv, 5, z2, &caps)?;
            Ok(("0 0 0 0".into(), format!("{t0} {h4} {h1} {h5}")))
        });
    }
    let caps = r.caps().clone();
    r.check("vanishing.lie3", 7, "c2_2gen", || {
        let pg = find(groups, "c2_2gen")?;
        let lie = relation_module(pg)?.module.lie_power(3, false)?;
        let t0 = lie.coinvariants().invariants.torsion_part();
        let h4 = group_homology(&GModule::trivial(pg.clone()), 4, Coefficients::Mod(3), &caps)?;
        Ok(("0 0".into(), format!("{t0} {h4}")))
    });
}

fn kuzmin(r: &mut Runner) {
    for p in [2u64, 3, 5, 7] {
        r.check("kuzmin.values", 8, "-", || {
            Ok((format!("{:?} {:?}", [0, 0, 1], [0, 0, 0, 1]), format!("{:?} {:?}", kuzmin_poly(p, p)?, kuzmin_poly(p + 1, p)?)))
        });
    }
    r.check("kuzmin.values", 8, "-", || {
        Ok(("[0, 0, 0, 0, 1] [0, 0, 1, 0, 0, 0, 1]".into(), format!("{:?} {:?}", kuzmin_poly(6, 3)?, kuzmin_poly(9, 3)?)))
    });
    r.check("kuzmin.vanishing", 8, "-", || {
        let mut bad = Vec::new();
        for p in [2u64, 3, 5, 7] {
            for n in 2..=50u64 {
                let zero = kuzmin_poly(n, p)?.is_empty();
                if zero != (n % p != 0 && n % p != 1) {
                    bad.push(format!("f_{n}^({p})"));
                }
            }
        }
        Ok(("none".into(), if bad.is_empty() { "none".into() } else { bad.join(" ") }))
    });
}

/// Concrete queries for the seven rows of the fr_inf table.
pub const TABLE_ROWS: [(&str, Ring, &str); 7] = [
    ("r_3 f + f r_3", Ring::Integers, "H_4(G; Z/3)"),
    ("r_4 f + f r_4", Ring::Integers, "H_6(G; Z/2)"),
    ("s^3 f + f s^3", Ring::Inverted(2), "f_6^(3) H_6(G; Z/3)"),
    ("s^4 + f s^3 f", Ring::Inverted(2), "f_7^(3) H_7(G; Z/3)"),
    ("s^3 f + f s^3", Ring::Local(3), "H_10(G; Z/3)"),
    ("s^3 f + f s^2 f", Ring::Local(5), "H_7(G; Z/5)"),
    ("s^5 + f s^4 f", Ring::Local(3), "H_11(G; Z/3) ⊕ H_15(G; Z/3)"),
];

fn rule_base_integrity(r: &mut Runner, groups: &[GroupRef]) {
    r.check("rules.roundtrip", 9, "-", || {
        let bad: Vec<&str> = rule_base()
            .iter()
            .filter(|rule| match &rule.pattern {
                Pattern::Code(c) => parse_pattern(&c.to_string()).ok().as_ref() != Some(c),
                Pattern::Module(m) => parse_module_pattern(&m.to_string()).ok().as_ref() != Some(m),
            })
            .map(|rule| rule.id)
            .collect();
        Ok(("none".into(), if bad.is_empty() { "none".into() } else { bad.join(" ") }))
    });
    for (k, (code, ring, rhs)) in TABLE_ROWS.iter().enumerate() {
        r.check(&format!("rules.table_row_{}", k + 1), 9, "-", || {
            let t = frlang::translate(&parse(code)?, 1, *ring);
            Ok((rhs.to_string(), t.iter().map(|t| t.rhs.to_string()).collect::<Vec<_>>().join(" | ")))
        });
    }
    for (name, torsion) in [("c6", vec![6i64]), ("c2c4", vec![2, 2, 2, 4])] {
        for code in ["(f f + r)^2", "f f f + r r"] {
            let caps = r.caps().clone();
            r.check("rules.pavutnitskiy", 9, name, || {
                let pg = find(groups, name)?;
                let ev = evaluate_query(&parse_query(code)?, 1, Ring::Integers, pg, &caps)?;
                let v = ev.value.as_ref().map(show).unwrap_or_else(|| format!("{:?}", ev.status));
                Ok((show(&inv(0, &torsion)), v))
            });
        }
    }
}

fn violated(h: &Hypothesis, b: &frlang::Bindings, order: u64) -> Option<bool> {
    let divides_prime_up_to = |n: u64| (2..=n).any(|p| (2..p).all(|d| p % d != 0) && order % p == 0);
    match h {
        Hypothesis::PrimeTorsionless(p) => Some(order % p.eval_nat(b)? == 0),
        Hypothesis::FactorialTorsionless(n) => Some(divides_prime_up_to(n.eval_nat(b)?)),
        _ => None,
    }
}

/// All assignments of values in `lo..=hi` to `vars`.
fn assignments(vars: &[String], lo: i64, hi: i64) -> Vec<frlang::Bindings> {
    let mut out = vec![frlang::Bindings::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|b| {
                (lo..=hi).map(move |x| {
                    let mut b = b.clone();
                    b.insert(v.clone(), x);
                    b
                })
            })
            .collect();
    }
    out
}

fn hypothesis_gate(r: &mut Runner, groups: &[GroupRef]) {
    for rule in rule_base() {
        let gated = rule.hypotheses.iter().any(|h| matches!(h, Hypothesis::PrimeTorsionless(_) | Hypothesis::FactorialTorsionless(_)));
        if !gated {
            continue;
        }
        let vars: Vec<String> = rule.parameters().into_iter().collect();
        let mut grid = assignments(&vars, 0, 5);
        grid.sort_by_key(|b| (b.values().sum::<i64>(), b.values().copied().collect::<Vec<_>>()));
        let instances: Vec<_> = grid.into_iter().filter_map(|b| rule.instance(&b).map(|x| (b, x))).take(2).collect();
        let caps = r.caps().clone();
        r.check(&format!("gate.{}", rule.id), 10, "corpus", || {
            if instances.is_empty() {
                return Ok(("instances".into(), "no instance".into()));
            }
            let mut false_accepts = Vec::new();
            let mut refused = 0usize;
            for (b, (q, ring, i)) in &instances {
                for g in groups {
                    let order = g.order() as u64;
                    let bad = rule.hypotheses.iter().any(|h| violated(h, b, order) == Some(true));
                    if !bad {
                        continue;
                    }
                    let ev = match evaluate_query(q, *i, *ring, g, &caps) {
                        Err(e) if e.is_cap() => continue,
                        other => other?,
                    };
                    match ev.outcomes.iter().find(|o| o.id == rule.id) {
                        Some(o) if o.failed_hypotheses.is_empty() => false_accepts.push(format!("{q} on {}", g.name())),
                        Some(_) => refused += 1,
                        None => false_accepts.push(format!("{q} did not match on {}", g.name())),
                    }
                }
            }
            let computed = match (false_accepts.is_empty(), refused) {
                (true, 0) => "no violating evaluation ran".to_string(),
                (true, _) => "0 false acceptances".to_string(),
                _ => false_accepts.join("; "),
            };
            Ok(("0 false acceptances".into(), computed))
        });
    }
}
