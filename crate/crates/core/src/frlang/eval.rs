//! Numeric evaluation of translated codes on finite presented groups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::ast::Code;
use super::modcode::{Functor, ModuleCode};
use super::rules::{Coeff, HomologyExpr, Hypothesis, Ring, Term};
use super::translate::{translate_query, Query, Translation};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::gmodule::{functors::binomial, GModule, GroupRef};
use crate::homology::{homology_range, Coefficients, ResolutionKind};
use crate::linalg::{check_prime, factorize, AbelianInvariants};
use crate::relmod::relation_module;

/// Coefficients of `f_n^(p)`, lowest degree first, trailing zeros removed.
pub fn kuzmin_poly(n: u64, p: u64) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::Invalid(format!("Kuz'min polynomial needs n >= 2, got {n}")));
    }
    check_prime(p as i64)?;
    let mut memo = BTreeMap::new();
    let mut poly = kuzmin_rec(n, p, &mut memo);
    while poly.last() == Some(&0) {
        poly.pop();
    }
    Ok(poly)
}

fn kuzmin_rec(n: u64, p: u64, memo: &mut BTreeMap<u64, Vec<u64>>) -> Vec<u64> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let shift = |v: Vec<u64>, k: usize| {
        let mut out = vec![0; k];
        out.extend(v);
        out
    };
    let r = n % p;
    let out = if r != 0 && r != 1 {
        vec![]
    } else if n == p {
        vec![0, 0, 1]
    } else if r == 1 {
        shift(kuzmin_rec(n - 1, p, memo), 1)
    } else {
        let a = shift(kuzmin_rec(n - p, p, memo), 2);
        let b = kuzmin_rec(n / p, p, memo);
        let mut s = vec![0; a.len().max(b.len())];
        for (i, c) in a.iter().enumerate() {
            s[i] += c;
        }
        for (i, c) in b.iter().enumerate() {
            s[i] += c;
        }
        s
    };
    memo.insert(n, out.clone());
    out
}

/// `fH_n(G; Z/p) = ⊕_k H_{n+k}(G; Z/p)^{m_k}`.
pub fn apply_kuzmin(poly: &[u64], n: u64, p: u64, pg: &GroupRef, caps: &Caps) -> Result<AbelianInvariants> {
    check_prime(p as i64)?;
    let mut ctx = Context::new(pg, caps);
    ctx.kuzmin_applied(poly, n, p)
}

/// Lazily computed homology of one group.
pub(crate) struct Context<'a> {
    pg: &'a GroupRef,
    caps: &'a Caps,
    integral: Vec<AbelianInvariants>,
    aug: Option<GModule>,
}

impl<'a> Context<'a> {
    pub(crate) fn new(pg: &'a GroupRef, caps: &'a Caps) -> Self {
        Context { pg, caps, integral: Vec::new(), aug: None }
    }

    fn integral(&mut self, d: usize) -> Result<AbelianInvariants> {
        if d >= self.integral.len() {
            let t = GModule::trivial(self.pg.clone());
            self.integral = homology_range(&t, d, ResolutionKind::Reduced, self.caps)?;
        }
        Ok(self.integral[d].clone())
    }

    fn homology(&mut self, d: u64, coeff: Option<u64>) -> Result<AbelianInvariants> {
        let d = usize::try_from(d).map_err(|_| Error::Invalid("degree too large".into()))?;
        match coeff {
            None => self.integral(d),
            Some(q) => {
                if q < 2 {
                    return Err(Error::Invalid(format!("coefficients Z/{q}")));
                }
                let h = self.integral(d)?;
                let prev = if d > 0 { Some(self.integral(d - 1)?) } else { None };
                Coefficients::Mod(q).apply(&h, prev.as_ref())
            }
        }
    }

    fn aug(&mut self) -> Result<GModule> {
        if self.aug.is_none() {
            self.aug = Some(GModule::augmentation_ideal(self.pg.clone())?);
        }
        Ok(self.aug.clone().unwrap())
    }

    fn kuzmin_applied(&mut self, poly: &[u64], n: u64, p: u64) -> Result<AbelianInvariants> {
        let mut out = AbelianInvariants::zero();
        for (k, &m) in poly.iter().enumerate() {
            if m > 0 {
                out = out.direct_sum(&self.homology(n + k as u64, Some(p))?.power(m as usize));
            }
        }
        Ok(out)
    }

    fn num(e: &super::ast::Index) -> Result<u64> {
        e.as_num().ok_or_else(|| Error::Invalid(format!("unbound parameter in {e}")))
    }

    pub(crate) fn term(&mut self, t: &Term) -> Result<AbelianInvariants> {
        let n = |e| Self::num(e).map(|v| v as usize);
        let order = self.pg.order();
        Ok(match t {
            Term::H { degree, coeff } => {
                let q = match coeff {
                    Coeff::Z => None,
                    Coeff::Mod(p) => Some(Self::num(p)?),
                };
                self.homology(Self::num(degree)?, q)?
            }
            Term::Kuzmin { n: deg, p } => {
                let (deg, p) = (Self::num(deg)?, Self::num(p)?);
                let poly = kuzmin_poly(deg, p)?;
                self.kuzmin_applied(&poly, deg, p)?
            }
            Term::OddPrimeKuzminSum { .. } => return Err(Error::Invalid(format!("unexpanded sum {t}"))),
            Term::SymHomology { degree, power } => {
                let m = self.aug()?.sym_power(n(power)?)?;
                homology_range(&m, n(degree)?, ResolutionKind::Reduced, self.caps)?.pop().unwrap()
            }
            Term::Aug => AbelianInvariants::free(order - 1),
            Term::SymAug(k) => AbelianInvariants::free(binomial(order - 1 + n(k)? - 1, n(k)?)),
            Term::ExtAug(k) => AbelianInvariants::free(binomial(order - 1, n(k)?)),
            Term::RationalSymCoinv { lo, hi } => {
                let aug = self.aug()?;
                let mut total = 0;
                for j in n(lo)?..=n(hi)? {
                    total += aug.sym_power(j)?.coinvariants().invariants.rational_rank();
                }
                AbelianInvariants::free(total)
            }
            Term::FreeSymCoinv(k) => {
                AbelianInvariants::free(self.aug()?.sym_power(n(k)?)?.coinvariants().invariants.free_rank)
            }
            Term::AugTensorCube => {
                // g ⊗_ZG g is the diagonal coinvariants of g ⊗ g; tensoring
                // with the free group g of rank |G| - 1 takes that many copies.
                let aug = self.aug()?;
                aug.tensor(&aug)?.coinvariants().invariants.power(order - 1)
            }
            Term::TorAb => {
                let ab = self.pg.group().abelianization();
                ab.tor(&ab)
            }
            Term::TorsionBounded(_) | Term::Coker(_) => {
                return Err(Error::SymbolicOnly(t.to_string()));
            }
        })
    }

    pub(crate) fn expr(&mut self, e: &HomologyExpr) -> Result<AbelianInvariants> {
        let mut out = AbelianInvariants::zero();
        for t in &e.terms {
            out = out.direct_sum(&self.term(t)?);
        }
        Ok(out)
    }
}

/// The value of a fully evaluable expression, `None` when some summand has
/// no numerical model.
pub fn homology_of_expression(expr: &HomologyExpr, pg: &GroupRef, caps: &Caps) -> Result<Option<AbelianInvariants>> {
    if !expr.is_evaluable() {
        return Ok(None);
    }
    Context::new(pg, caps).expr(expr).map(Some)
}

/// Multiset of prime-power cyclic orders of the torsion.
fn elementary_divisors(a: &AbelianInvariants) -> BTreeMap<BigInt, usize> {
    let mut out = BTreeMap::new();
    for d in &a.torsion {
        for (p, e) in factorize(d) {
            *out.entry(num_traits::pow(p, e as usize)).or_insert(0) += 1;
        }
    }
    out
}

/// Checks `total ≅ named ⊕ T` with `T` torsion of exponent dividing `bound`.
fn check_torsion_bounded(total: &AbelianInvariants, named: &AbelianInvariants, bound: u64) -> std::result::Result<(), String> {
    if total.free_rank != named.free_rank {
        return Err(format!("free rank {} of {total} differs from the named summands {named}", total.free_rank));
    }
    let mut rest = elementary_divisors(total);
    for (q, c) in elementary_divisors(named) {
        let have = rest.entry(q.clone()).or_insert(0);
        if *have < c {
            return Err(format!("named summand Z/{q} does not occur in {total}"));
        }
        *have -= c;
    }
    let bound = BigInt::from(bound);
    for (q, c) in rest {
        if c > 0 && !(&bound % &q).is_zero() {
            return Err(format!("remaining summand Z/{q} of {total} has exponent not dividing {bound}"));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalStatus {
    Ok,
    Symbolic,
    NoRule,
    HypothesisFailed,
}

impl EvalStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalStatus::Ok => "ok",
            EvalStatus::Symbolic => "symbolic",
            EvalStatus::NoRule => "no_rule",
            EvalStatus::HypothesisFailed => "hypothesis_failed",
        }
    }
}

/// What happened to one matching rule.
#[derive(Clone, Debug, Serialize)]
pub struct RuleOutcome {
    pub id: &'static str,
    pub failed_hypotheses: Vec<Hypothesis>,
    pub value: Option<AbelianInvariants>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub symbolic: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Evaluation {
    pub code: String,
    pub i: u64,
    pub ring: Ring,
    pub group: String,
    pub rules: Vec<Translation>,
    pub outcomes: Vec<RuleOutcome>,
    pub status: EvalStatus,
    pub value: Option<AbelianInvariants>,
    /// For `coinv(...)` codes at `i = 0`: the coinvariants on the given
    /// presentation, which contain the limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation_value: Option<AbelianInvariants>,
    /// Failed bound checks and disagreements between rules.
    pub check_failures: Vec<String>,
}

/// The four possible answers of an evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    AbelianInvariants(AbelianInvariants),
    SymbolicOnly(Vec<String>),
    NoRule,
    HypothesisFailed(Vec<Hypothesis>),
}

impl Evaluation {
    pub fn outcome(&self) -> EvalOutcome {
        match self.status {
            EvalStatus::Ok => EvalOutcome::AbelianInvariants(self.value.clone().unwrap()),
            EvalStatus::Symbolic => {
                EvalOutcome::SymbolicOnly(self.outcomes.iter().flat_map(|o| o.symbolic.iter().cloned()).collect())
            }
            EvalStatus::NoRule => EvalOutcome::NoRule,
            EvalStatus::HypothesisFailed => {
                let mut hs: Vec<Hypothesis> = self.outcomes.iter().flat_map(|o| o.failed_hypotheses.iter().cloned()).collect();
                hs.sort();
                hs.dedup();
                EvalOutcome::HypothesisFailed(hs)
            }
        }
    }

    pub fn verified(&self) -> bool {
        self.check_failures.is_empty()
    }
}

pub fn evaluate(code: &Code, i: u64, ring: Ring, pg: &GroupRef, caps: &Caps) -> Result<Evaluation> {
    evaluate_query(&Query::Code(super::ast::normalize(code)), i, ring, pg, caps)
}

pub fn module_code_evaluate(code: &ModuleCode, i: u64, ring: Ring, pg: &GroupRef, caps: &Caps) -> Result<Evaluation> {
    evaluate_query(&Query::Module(code.clone()), i, ring, pg, caps)
}

pub fn evaluate_query(q: &Query, i: u64, ring: Ring, pg: &GroupRef, caps: &Caps) -> Result<Evaluation> {
    let rules = translate_query(q, i, ring);
    let mut ctx = Context::new(pg, caps);
    let mut outcomes = Vec::new();
    let mut check_failures = Vec::new();
    for t in &rules {
        let failed: Vec<Hypothesis> = t
            .hypotheses
            .iter()
            .filter(|h| h.torsion(&t.bindings).is_some_and(|th| !pg.group().torsionless(th)))
            .cloned()
            .collect();
        let mut out = RuleOutcome { id: t.rule_id, failed_hypotheses: failed, value: None, symbolic: vec![], checks: vec![] };
        if out.failed_hypotheses.is_empty() {
            evaluate_rule(t, ring, &mut ctx, &mut out)?;
            check_failures.extend(out.checks.iter().filter(|c| c.starts_with("FAIL")).map(|c| format!("{}: {c}", t.rule_id)));
        }
        outcomes.push(out);
    }
    let passing: Vec<&RuleOutcome> = outcomes.iter().filter(|o| o.failed_hypotheses.is_empty()).collect();
    let values: Vec<(&str, &AbelianInvariants)> = passing.iter().filter_map(|o| o.value.as_ref().map(|v| (o.id, v))).collect();
    let status = if rules.is_empty() {
        EvalStatus::NoRule
    } else if passing.is_empty() {
        EvalStatus::HypothesisFailed
    } else if values.is_empty() {
        EvalStatus::Symbolic
    } else {
        EvalStatus::Ok
    };
    if let Some((id0, v0)) = values.first() {
        for (id, v) in &values[1..] {
            if v != v0 {
                check_failures.push(format!("rules {id0} and {id} disagree: {v0} vs {v}"));
            }
        }
    }
    let value = values.first().map(|(_, v)| (*v).clone());
    let presentation_value = match q {
        Query::Module(ModuleCode::Coinv { functor, power }) if i == 0 => match power.as_num() {
            Some(n) => Some(presentation_coinvariants(pg, *functor, n as usize)?),
            None => None,
        },
        _ => None,
    };
    Ok(Evaluation {
        code: q.to_string(),
        i,
        ring,
        group: pg.name().to_string(),
        rules,
        outcomes,
        status,
        value,
        presentation_value,
        check_failures,
    })
}

fn evaluate_rule(t: &Translation, ring: Ring, ctx: &mut Context, out: &mut RuleOutcome) -> Result<()> {
    if t.rhs.has_symbolic() {
        out.symbolic = t.rhs.terms.iter().filter(|x| !x.evaluable()).map(|x| x.to_string()).collect();
        return Ok(());
    }
    let value = if t.rhs.is_evaluable() {
        ctx.expr(&t.rhs)?
    } else if let Some(total) = &t.total {
        let x = ctx.term(total)?;
        let named = HomologyExpr::of(t.rhs.terms.iter().filter(|x| x.evaluable()).cloned().collect());
        let named = ctx.expr(&named)?;
        let bound = t
            .rhs
            .terms
            .iter()
            .filter_map(|x| match x {
                Term::TorsionBounded(k) => k.as_num(),
                _ => None,
            })
            .fold(1u64, num_integer::lcm);
        match check_torsion_bounded(&x, &named, bound) {
            Ok(()) => out.checks.push(format!("ok: {x} = {named} ⊕ (exponent | {bound})")),
            Err(e) => out.checks.push(format!("FAIL: {e}")),
        }
        x
    } else {
        out.symbolic = t.rhs.terms.iter().filter(|x| !x.evaluable()).map(|x| x.to_string()).collect();
        return Ok(());
    };
    if let Some(e) = t.exponent_divides {
        let exp = value.torsion_exponent();
        if value.free_rank == 0 && (BigInt::from(e) % &exp).is_zero() {
            out.checks.push(format!("ok: exponent {exp} divides {e}"));
        } else {
            out.checks.push(format!("FAIL: {value} is not torsion of exponent dividing {e}"));
        }
    }
    out.value = Some(ring.apply(&value)?);
    Ok(())
}

/// `FUNC^n(M)` for a module free over `Z`.
pub fn functor_power(m: &GModule, functor: Functor, n: usize) -> Result<GModule> {
    match functor {
        Functor::Tensor => m.tensor_power(n),
        Functor::Sym => m.sym_power(n),
        Functor::Ext => m.ext_power(n),
        Functor::Gamma => m.div_power(n),
        Functor::Lie => m.lie_power(n, false),
    }
}

/// `(FUNC^n R_ab)_G` for the presentation of `pg`.
pub fn presentation_coinvariants(pg: &GroupRef, functor: Functor, n: usize) -> Result<AbelianInvariants> {
    let rm = relation_module(pg)?;
    Ok(functor_power(&rm.module, functor, n)?.coinvariants().invariants)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::frlang::ast::parse;
    use crate::group::PresentedGroup;

    #[test]
    fn kuzmin_values() {
        assert_eq!(kuzmin_poly(3, 3).unwrap(), vec![0, 0, 1]);
        assert_eq!(kuzmin_poly(4, 3).unwrap(), vec![0, 0, 0, 1]);
        assert_eq!(kuzmin_poly(6, 3).unwrap(), vec![0, 0, 0, 0, 1]);
        assert_eq!(kuzmin_poly(9, 3).unwrap(), vec![0, 0, 1, 0, 0, 0, 1]);
        assert!(kuzmin_poly(2, 3).unwrap().is_empty());
        assert!(kuzmin_poly(1, 3).is_err());
        assert!(kuzmin_poly(6, 4).is_err());
    }

    #[test]
    fn bounded_torsion_check() {
        let x = AbelianInvariants::from_i64(0, &[2, 6]);
        assert!(check_torsion_bounded(&x, &AbelianInvariants::cyclic(3), 2).is_ok());
        assert!(check_torsion_bounded(&x, &AbelianInvariants::cyclic(9), 2).is_err());
        assert!(check_torsion_bounded(&x, &AbelianInvariants::zero(), 2).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let caps = Caps::default();
        let c3 = Arc::new(PresentedGroup::cyclic(3, &caps).unwrap());
        let e = evaluate(&parse("r_2 f + f r_2").unwrap(), 1, Ring::Integers, &c3, &caps).unwrap();
        assert_eq!(e.status, EvalStatus::Ok);
        assert!(e.value.unwrap().is_zero());
        let c6 = Arc::new(PresentedGroup::cyclic(6, &caps).unwrap());
        let e = evaluate(&parse("(ff + r)^2").unwrap(), 1, Ring::Integers, &c6, &caps).unwrap();
        assert_eq!(e.value.unwrap(), AbelianInvariants::cyclic(6));
        let e = evaluate(&parse("r_2 f + f r_2").unwrap(), 1, Ring::Integers, &c6, &caps).unwrap();
        assert_eq!(e.status, EvalStatus::HypothesisFailed);
        let e = evaluate(&parse("f r f").unwrap(), 1, Ring::Integers, &c6, &caps).unwrap();
        assert_eq!(e.status, EvalStatus::NoRule);
        let e = evaluate(&parse("r f r + f r f").unwrap(), 1, Ring::Integers, &c6, &caps).unwrap();
        assert_eq!(e.status, EvalStatus::Symbolic);
        let e = evaluate(&parse("r^2 f + f r^2").unwrap(), 1, Ring::Integers, &c3, &caps).unwrap();
        assert_eq!(e.value.unwrap(), AbelianInvariants::zero());
        let e = evaluate(&parse("r^2 + f r f").unwrap(), 1, Ring::Integers, &c3, &caps).unwrap();
        assert_eq!(e.value.unwrap(), AbelianInvariants::cyclic(3));
    }

    #[test]
    fn apply_kuzmin_on_c3() {
        let caps = Caps::default();
        let c3 = Arc::new(PresentedGroup::cyclic(3, &caps).unwrap());
        // x^2 + x^6 on H_9(C_3; Z/3): two copies of Z/3.
        let v = apply_kuzmin(&kuzmin_poly(9, 3).unwrap(), 9, 3, &c3, &caps).unwrap();
        assert_eq!(v, AbelianInvariants::from_i64(0, &[3, 3]));
    }
}
