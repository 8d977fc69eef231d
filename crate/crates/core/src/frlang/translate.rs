//! Matching codes against the rule base.

use std::collections::BTreeSet;

use serde::Serialize;

use super::ast::{normalize, Bindings, Code, Index};
use super::modcode::ModuleCode;
use super::rules::{rule_base, Hypothesis, HomologyExpr, LimitPattern, Pattern, Ring, Term, TranslationRule};

/// One instantiated rule.
#[derive(Clone, Debug, Serialize)]
pub struct Translation {
    #[serde(rename = "id")]
    pub rule_id: &'static str,
    pub rhs: HomologyExpr,
    /// Group conditions and unchecked side conditions, instantiated.
    pub hypotheses: Vec<Hypothesis>,
    pub paper_ref: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
    #[serde(skip)]
    pub bindings: Bindings,
    #[serde(skip)]
    pub total: Option<Term>,
    #[serde(skip)]
    pub exponent_divides: Option<u64>,
}

impl Translation {
    pub fn rule(&self) -> &'static TranslationRule {
        rule_base().iter().find(|r| r.id == self.rule_id).expect("translation of a known rule")
    }
}

/// Either kind of query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Code(Code),
    Module(ModuleCode),
}

impl std::fmt::Display for Query {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Query::Code(c) => write!(f, "{c}"),
            Query::Module(m) => write!(f, "{m}"),
        }
    }
}

/// Parses either an fr-code or a module code.
pub fn parse_query(text: &str) -> crate::Result<Query> {
    if super::modcode::looks_like_module_code(text) {
        Ok(Query::Module(super::modcode::parse_module_code(text)?))
    } else {
        Ok(Query::Code(super::ast::parse(text)?))
    }
}

/// Every rule matching `code` at `lim^i` over `ring`, once per binding.
pub fn translate(code: &Code, i: u64, ring: Ring) -> Vec<Translation> {
    translate_query(&Query::Code(normalize(code)), i, ring)
}

pub fn module_code_translate(code: &ModuleCode, i: u64, ring: Ring) -> Vec<Translation> {
    translate_query(&Query::Module(code.clone()), i, ring)
}

pub fn translate_query(q: &Query, i: u64, ring: Ring) -> Vec<Translation> {
    let mut out = Vec::new();
    for rule in rule_base() {
        let alternatives = match (&rule.pattern, q) {
            (Pattern::Code(p), Query::Code(c)) => unify(p, c),
            (Pattern::Module(p), Query::Module(c)) => unify_module(p, c),
            _ => continue,
        };
        let mut seen = BTreeSet::new();
        for mut cons in alternatives {
            let Some(rc) = rule.ring.constraints(ring) else { break };
            cons.extend(rc);
            if let LimitPattern::Eq(e) = &rule.limit {
                cons.push((e.clone(), i as i64));
            }
            for b in solve(&cons, &rule.bindable()) {
                if accept(rule, &b, i, ring) && seen.insert(b.clone()) {
                    out.push(instantiate(rule, b));
                }
            }
        }
    }
    out
}

fn accept(rule: &TranslationRule, b: &Bindings, i: u64, ring: Ring) -> bool {
    if let LimitPattern::Ne(e) = &rule.limit {
        match e.eval(b) {
            Some(v) if v != i as i64 => {}
            _ => return false,
        }
    }
    if !rule.ring.post_check(ring, b) {
        return false;
    }
    for h in &rule.hypotheses {
        if h.is_group_condition() {
            if h.torsion(b).is_none() {
                return false;
            }
            continue;
        }
        if matches!(h, Hypothesis::Assumed(_)) {
            continue;
        }
        if h.check_parameters(b) != Some(true) {
            return false;
        }
    }
    // Every index on the right must be defined.
    let mut vs = BTreeSet::new();
    rule.rhs.vars(&mut vs);
    vs.iter().all(|v| b.contains_key(v))
}

fn instantiate(rule: &'static TranslationRule, b: Bindings) -> Translation {
    Translation {
        rule_id: rule.id,
        rhs: rule.rhs.subst(&b),
        hypotheses: rule
            .hypotheses
            .iter()
            .filter(|h| h.is_group_condition() || matches!(h, Hypothesis::Assumed(_)))
            .map(|h| h.subst(&b))
            .collect(),
        paper_ref: rule.paper_ref,
        note: rule.note,
        total: rule.total.as_ref().map(|t| t.subst(&b).remove(0)),
        exponent_divides: rule.exponent_divides.as_ref().and_then(|e| e.eval_nat(&b)),
        bindings: b,
    }
}

type Constraints = Vec<(Index, i64)>;

/// Limit on alternative constraint sets produced by permutations and holes.
const MAX_ALTERNATIVES: usize = 4096;

fn cross(a: Vec<Constraints>, b: Vec<Constraints>) -> Vec<Constraints> {
    let mut out = Vec::new();
    for x in &a {
        for y in &b {
            if out.len() >= MAX_ALTERNATIVES {
                return out;
            }
            let mut z = x.clone();
            z.extend(y.iter().cloned());
            out.push(z);
        }
    }
    out
}

fn index_constraint(p: &Index, v: u64) -> Vec<Constraints> {
    match p.as_num() {
        Some(n) if n == v => vec![vec![]],
        Some(_) => vec![],
        None => vec![vec![(p.clone(), v as i64)]],
    }
}

/// Constraint sets under which the pattern equals the concrete code.
pub(crate) fn unify(p: &Code, c: &Code) -> Vec<Constraints> {
    match (p, c) {
        (Code::F, Code::F) => vec![vec![]],
        (Code::R(e), Code::R(m)) => match m.as_num() {
            Some(m) => index_constraint(e, m),
            None => vec![],
        },
        (Code::Hole(_), _) => vec![vec![]],
        (Code::Pow(pb, pe), Code::Pow(cb, ce)) => match ce.as_num() {
            Some(k) => {
                let mut out = cross(unify(pb, cb), index_constraint(pe, k));
                // `(x^a)^e` against `x^k`.
                if let Code::Pow(..) = **pb {
                    out.extend(cross(unify(pb, c), index_constraint(pe, 1)));
                }
                out
            }
            None => vec![],
        },
        (Code::Pow(pb, pe), _) => cross(unify(pb, c), index_constraint(pe, 1)),
        (Code::Prod(ps), _) => {
            let cs: Vec<Code> = match c {
                Code::Prod(xs) => xs.clone(),
                other => vec![other.clone()],
            };
            let has_holes = ps.iter().any(|x| matches!(x, Code::Hole(_)));
            let cs = if has_holes { expand_powers(&cs) } else { cs };
            unify_seq(ps, &cs)
        }
        (Code::Sum(ps), Code::Sum(cs)) | (Code::Inter(ps), Code::Inter(cs)) => {
            if std::mem::discriminant(p) != std::mem::discriminant(c) || ps.len() != cs.len() {
                return vec![];
            }
            let mut out = Vec::new();
            let mut used = vec![false; cs.len()];
            permute(ps, cs, 0, &mut used, vec![], &mut out);
            out
        }
        _ => vec![],
    }
}

fn permute(ps: &[Code], cs: &[Code], k: usize, used: &mut [bool], acc: Constraints, out: &mut Vec<Constraints>) {
    if out.len() >= MAX_ALTERNATIVES {
        return;
    }
    if k == ps.len() {
        out.push(acc);
        return;
    }
    for j in 0..cs.len() {
        if used[j] {
            continue;
        }
        let alts = unify(&ps[k], &cs[j]);
        if alts.is_empty() {
            continue;
        }
        used[j] = true;
        for a in alts {
            let mut next = acc.clone();
            next.extend(a);
            permute(ps, cs, k + 1, used, next, out);
        }
        used[j] = false;
    }
}

/// `x^k` with numeric `k` becomes `k` copies of `x`.
fn expand_powers(cs: &[Code]) -> Vec<Code> {
    let mut out = Vec::new();
    for c in cs {
        match c {
            Code::Pow(b, e) if e.as_num().is_some_and(|k| k <= 64) => {
                for _ in 0..e.as_num().unwrap() {
                    out.push((**b).clone());
                }
            }
            other => out.push(other.clone()),
        }
    }
    out
}

fn unify_seq(ps: &[Code], cs: &[Code]) -> Vec<Constraints> {
    if ps.is_empty() {
        return if cs.is_empty() { vec![vec![]] } else { vec![] };
    }
    if let Code::Hole(_) = ps[0] {
        let mut out = Vec::new();
        for take in 1..=cs.len() {
            out.extend(unify_seq(&ps[1..], &cs[take..]));
        }
        return out;
    }
    if cs.is_empty() {
        return vec![];
    }
    let head = unify(&ps[0], &cs[0]);
    if head.is_empty() {
        return vec![];
    }
    cross(head, unify_seq(&ps[1..], &cs[1..]))
}

fn unify_module(p: &ModuleCode, c: &ModuleCode) -> Vec<Constraints> {
    let power = |e: &Index, v: &Index| match v.as_num() {
        Some(v) => index_constraint(e, v),
        None => vec![],
    };
    match (p, c) {
        (ModuleCode::Coinv { functor: f, power: e }, ModuleCode::Coinv { functor: g, power: v })
        | (ModuleCode::OfIdeal { functor: f, power: e }, ModuleCode::OfIdeal { functor: g, power: v }) => {
            if f == g {
                power(e, v)
            } else {
                vec![]
            }
        }
        (ModuleCode::FreeMetabelianHomology { degree: e }, ModuleCode::FreeMetabelianHomology { degree: v }) => power(e, v),
        _ => vec![],
    }
}

/// All assignments of naturals to `vars` satisfying every constraint.
pub(crate) fn solve(cons: &Constraints, vars: &BTreeSet<String>) -> Vec<Bindings> {
    let mut b = Bindings::new();
    // Direct assignments first.
    for (e, v) in cons {
        if let Index::Var(x) = e {
            if let Some(old) = b.insert(x.clone(), *v) {
                if old != *v {
                    return vec![];
                }
            }
        }
    }
    let mut needed = BTreeSet::new();
    for (e, _) in cons {
        e.vars(&mut needed);
    }
    let free: Vec<String> = needed.into_iter().filter(|v| !b.contains_key(v) && vars.contains(v)).collect();
    let bound = cons.iter().map(|(_, v)| *v).max().unwrap_or(0).max(0) * 2 + 4;
    let mut out = Vec::new();
    search(cons, &free, 0, bound, &mut b, &mut out);
    out
}

fn search(cons: &Constraints, free: &[String], k: usize, bound: i64, b: &mut Bindings, out: &mut Vec<Bindings>) {
    if k == free.len() {
        if cons.iter().all(|(e, v)| e.eval(b) == Some(*v)) {
            out.push(b.clone());
        }
        return;
    }
    for x in 0..=bound {
        b.insert(free[k].clone(), x);
        // Prune on constraints whose variables are all assigned.
        let ok = cons.iter().all(|(e, v)| {
            let mut vs = BTreeSet::new();
            e.vars(&mut vs);
            !vs.iter().all(|v| b.contains_key(v)) || e.eval(b) == Some(*v)
        });
        if ok {
            search(cons, free, k + 1, bound, b, out);
        }
    }
    b.remove(&free[k]);
}
