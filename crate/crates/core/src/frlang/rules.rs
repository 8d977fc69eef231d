//! The translation rule base: pattern, ring, limit index, hypotheses and
//! right-hand side of every known formula for higher limits of codes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use super::ast::{parse_index, parse_pattern, Bindings, Code, Index};
use super::modcode::{parse_module_pattern, ModuleCode};
use super::translate::Query;
use crate::error::{Error, Result};
use crate::group::TorsionHypothesis;
use crate::linalg::{check_prime, is_prime, AbelianInvariants};

/// Coefficient ring of the group ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    /// `Z[1/N]`.
    Inverted(u64),
    /// `Z_(p)`.
    Local(u64),
    Rationals,
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| t.parse::<u64>().map_err(|_| Error::Invalid(format!("bad ring {s:?}")));
        Ok(match s {
            "Z" => Ring::Integers,
            "Z12" => Ring::Inverted(2),
            "Q" => Ring::Rationals,
            _ => {
                if let Some(p) = s.strip_prefix("Zp:") {
                    Ring::Local(check_prime(num(p)? as i64)?)
                } else if let Some(n) = s.strip_prefix("Zinv:") {
                    match num(n)? {
                        0 => return Err(Error::Invalid("cannot invert 0".into())),
                        1 => Ring::Integers,
                        n => Ring::Inverted(n),
                    }
                } else {
                    return Err(Error::Invalid(format!("unknown ring {s:?} (expected Z, Z12, Zinv:N, Zp:p or Q)")));
                }
            }
        })
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Inverted(2) => write!(f, "Z12"),
            Ring::Inverted(n) => write!(f, "Zinv:{n}"),
            Ring::Local(p) => write!(f, "Zp:{p}"),
            Ring::Rationals => write!(f, "Q"),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Ring {
    /// `A ⊗ ring` for a finitely generated abelian group `A`.
    pub fn apply(&self, a: &AbelianInvariants) -> Result<AbelianInvariants> {
        Ok(match *self {
            Ring::Integers => a.clone(),
            Ring::Inverted(n) => a.invert(n as i64),
            Ring::Local(p) => a.localize(p as i64)?,
            Ring::Rationals => AbelianInvariants::free(a.rational_rank()),
        })
    }

    fn inverted_primes(&self) -> Option<BTreeSet<u64>> {
        match *self {
            Ring::Integers => Some(BTreeSet::new()),
            Ring::Inverted(n) => Some((2..=n).filter(|&p| is_prime(p) && n % p == 0).collect()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingPattern {
    Exact(Ring),
    /// `Z_(p)` with `p` possibly a parameter.
    Local(Index),
    /// `Z[1/n!]`: matches `Z[1/N]` when the primes dividing `N` are exactly
    /// the primes up to `n`.
    InvertFactorial(Index),
    /// Valid over every ring in scope (all are hereditary).
    Any,
}

impl fmt::Display for RingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingPattern::Exact(r) => write!(f, "{r}"),
            RingPattern::Local(p) => write!(f, "Z_({p})"),
            RingPattern::InvertFactorial(n) => write!(f, "Z[1/({n})!]"),
            RingPattern::Any => write!(f, "any"),
        }
    }
}

impl RingPattern {
    /// Constraints on parameters needed for `ring` to match, or `None` when
    /// the ring cannot match.
    pub(crate) fn constraints(&self, ring: Ring) -> Option<Vec<(Index, i64)>> {
        match (self, ring) {
            (RingPattern::Any, _) => Some(Vec::new()),
            (RingPattern::Exact(r), q) => (*r == q).then(Vec::new),
            (RingPattern::Local(e), Ring::Local(p)) => Some(vec![(e.clone(), p as i64)]),
            (RingPattern::InvertFactorial(_), Ring::Inverted(_)) => Some(Vec::new()),
            _ => None,
        }
    }

    pub(crate) fn post_check(&self, ring: Ring, b: &Bindings) -> bool {
        match self {
            RingPattern::InvertFactorial(n) => match (n.eval_nat(b), ring.inverted_primes()) {
                (Some(n), Some(primes)) => primes == (2..=n).filter(|&p| is_prime(p)).collect(),
                _ => false,
            },
            _ => true,
        }
    }
}

/// Which limit indices a rule covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitPattern {
    /// `i` equal to the expression (which may be the free parameter `i`).
    Eq(Index),
    /// Every `i` different from the expression.
    Ne(Index),
    Any,
}

impl fmt::Display for LimitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitPattern::Eq(e) => write!(f, "i = {e}"),
            LimitPattern::Ne(e) => write!(f, "i != {e}"),
            LimitPattern::Any => write!(f, "any i"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hypothesis {
    /// No element of order `p`.
    PrimeTorsionless(Index),
    /// No `q`-torsion for primes `q <= n`.
    FactorialTorsionless(Index),
    TorsionFree,
    Prime(Index),
    OddPrime(Index),
    AtLeast(Index, i64),
    AtMost(Index, i64),
    Less(Index, Index),
    Even(Index),
    Odd(Index),
    /// A side condition with no finite-group test; reported, not checked.
    Assumed(&'static str),
}

impl Hypothesis {
    /// Conditions on the group rather than on parameters.
    pub fn is_group_condition(&self) -> bool {
        matches!(self, Hypothesis::PrimeTorsionless(_) | Hypothesis::FactorialTorsionless(_) | Hypothesis::TorsionFree)
    }

    /// Truth value of a parameter condition; `None` for group conditions or
    /// unbound parameters.
    pub fn check_parameters(&self, b: &Bindings) -> Option<bool> {
        let v = |e: &Index| e.eval(b);
        Some(match self {
            Hypothesis::Prime(e) => v(e)? > 1 && is_prime(v(e)? as u64),
            Hypothesis::OddPrime(e) => v(e)? > 2 && is_prime(v(e)? as u64),
            Hypothesis::AtLeast(e, k) => v(e)? >= *k,
            Hypothesis::AtMost(e, k) => v(e)? <= *k,
            Hypothesis::Less(x, y) => v(x)? < v(y)?,
            Hypothesis::Even(e) => v(e)? % 2 == 0,
            Hypothesis::Odd(e) => v(e)?.rem_euclid(2) == 1,
            _ => return None,
        })
    }

    /// The finite-group form of a group condition.
    pub fn torsion(&self, b: &Bindings) -> Option<TorsionHypothesis> {
        match self {
            Hypothesis::PrimeTorsionless(p) => Some(TorsionHypothesis::Prime(p.eval_nat(b)?)),
            Hypothesis::FactorialTorsionless(n) => Some(TorsionHypothesis::Factorial(n.eval_nat(b)?)),
            Hypothesis::TorsionFree => Some(TorsionHypothesis::All),
            _ => None,
        }
    }

    pub fn subst(&self, b: &Bindings) -> Hypothesis {
        let s = |e: &Index| e.subst(b);
        match self {
            Hypothesis::PrimeTorsionless(e) => Hypothesis::PrimeTorsionless(s(e)),
            Hypothesis::FactorialTorsionless(e) => Hypothesis::FactorialTorsionless(s(e)),
            Hypothesis::Prime(e) => Hypothesis::Prime(s(e)),
            Hypothesis::OddPrime(e) => Hypothesis::OddPrime(s(e)),
            Hypothesis::AtLeast(e, k) => Hypothesis::AtLeast(s(e), *k),
            Hypothesis::AtMost(e, k) => Hypothesis::AtMost(s(e), *k),
            Hypothesis::Less(x, y) => Hypothesis::Less(s(x), s(y)),
            Hypothesis::Even(e) => Hypothesis::Even(s(e)),
            Hypothesis::Odd(e) => Hypothesis::Odd(s(e)),
            other => other.clone(),
        }
    }

    fn indices(&self) -> Vec<&Index> {
        match self {
            Hypothesis::PrimeTorsionless(e)
            | Hypothesis::FactorialTorsionless(e)
            | Hypothesis::Prime(e)
            | Hypothesis::OddPrime(e)
            | Hypothesis::AtLeast(e, _)
            | Hypothesis::AtMost(e, _)
            | Hypothesis::Even(e)
            | Hypothesis::Odd(e) => vec![e],
            Hypothesis::Less(x, y) => vec![x, y],
            Hypothesis::TorsionFree | Hypothesis::Assumed(_) => vec![],
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |e: &Index| if e.as_num().is_some() || matches!(e, Index::Var(_)) { e.to_string() } else { format!("({e})") };
        match self {
            Hypothesis::PrimeTorsionless(p) => write!(f, "{}-torsionless", paren(p)),
            Hypothesis::FactorialTorsionless(n) => write!(f, "{}!-torsionless", paren(n)),
            Hypothesis::TorsionFree => write!(f, "torsion-free"),
            Hypothesis::Prime(p) => write!(f, "{p} prime"),
            Hypothesis::OddPrime(p) => write!(f, "{p} odd prime"),
            Hypothesis::AtLeast(e, k) => write!(f, "{e} >= {k}"),
            Hypothesis::AtMost(e, k) => write!(f, "{e} <= {k}"),
            Hypothesis::Less(x, y) => write!(f, "{x} < {y}"),
            Hypothesis::Even(e) => write!(f, "{e} even"),
            Hypothesis::Odd(e) => write!(f, "{e} odd"),
            Hypothesis::Assumed(s) => write!(f, "assumed: {s}"),
        }
    }
}

impl Serialize for Hypothesis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Coefficients of a homology term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Z,
    Mod(Index),
}

/// One summand of a right-hand side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// `H_j(G; A)`.
    H { degree: Index, coeff: Coeff },
    /// `f_n^(p) H_n(G; Z/p)`.
    Kuzmin { n: Index, p: Index },
    /// `⊕_{odd p | d} f_n^(p) H_n(G; Z/p)`; expands once `d` is known.
    OddPrimeKuzminSum { divisor_of: Index, n: Index },
    /// `H_k(G; S^n(g))`.
    SymHomology { degree: Index, power: Index },
    /// The augmentation ideal `g` as an abelian group.
    Aug,
    SymAug(Index),
    ExtAug(Index),
    /// `⊕_{lo <= j <= hi} S^j_Q(g)_G`.
    RationalSymCoinv { lo: Index, hi: Index },
    /// `F((S^n(g))_G)`, the free part.
    FreeSymCoinv(Index),
    /// `(g ⊗_{ZG} g) ⊗ g`.
    AugTensorCube,
    /// `Tor(G_ab, G_ab)`.
    TorAb,
    /// A group of exponent dividing `k`.
    TorsionBounded(Index),
    /// The cokernel of a map with no numerical model.
    Coker(&'static str),
}

impl Term {
    pub fn evaluable(&self) -> bool {
        !matches!(self, Term::Coker(_) | Term::TorsionBounded(_))
    }

    fn indices(&self) -> Vec<&Index> {
        match self {
            Term::H { degree, coeff: Coeff::Mod(p) } => vec![degree, p],
            Term::H { degree, coeff: Coeff::Z } => vec![degree],
            Term::Kuzmin { n, p } => vec![n, p],
            Term::OddPrimeKuzminSum { divisor_of, n } => vec![divisor_of, n],
            Term::SymHomology { degree, power } => vec![degree, power],
            Term::SymAug(e) | Term::ExtAug(e) | Term::FreeSymCoinv(e) | Term::TorsionBounded(e) => vec![e],
            Term::RationalSymCoinv { lo, hi } => vec![lo, hi],
            Term::Aug | Term::AugTensorCube | Term::TorAb | Term::Coker(_) => vec![],
        }
    }

    /// Substitutes parameters; sums over primes dividing a known number are
    /// expanded into their summands.
    pub fn subst(&self, b: &Bindings) -> Vec<Term> {
        let s = |e: &Index| e.subst(b);
        match self {
            Term::H { degree, coeff } => vec![Term::H {
                degree: s(degree),
                coeff: match coeff {
                    Coeff::Z => Coeff::Z,
                    Coeff::Mod(p) => Coeff::Mod(s(p)),
                },
            }],
            Term::Kuzmin { n, p } => vec![Term::Kuzmin { n: s(n), p: s(p) }],
            Term::OddPrimeKuzminSum { divisor_of, n } => match divisor_of.eval_nat(b) {
                Some(d) if d > 0 => (3..=d)
                    .filter(|&p| is_prime(p) && d % p == 0)
                    .map(|p| Term::Kuzmin { n: s(n), p: Index::Num(p) })
                    .collect(),
                _ => vec![Term::OddPrimeKuzminSum { divisor_of: s(divisor_of), n: s(n) }],
            },
            Term::SymHomology { degree, power } => vec![Term::SymHomology { degree: s(degree), power: s(power) }],
            Term::SymAug(e) => vec![Term::SymAug(s(e))],
            Term::ExtAug(e) => vec![Term::ExtAug(s(e))],
            Term::RationalSymCoinv { lo, hi } => vec![Term::RationalSymCoinv { lo: s(lo), hi: s(hi) }],
            Term::FreeSymCoinv(e) => vec![Term::FreeSymCoinv(s(e))],
            Term::TorsionBounded(e) => vec![Term::TorsionBounded(s(e))],
            other => vec![other.clone()],
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::H { degree, coeff: Coeff::Z } => write!(f, "H_{degree}(G)"),
            Term::H { degree, coeff: Coeff::Mod(p) } => write!(f, "H_{degree}(G; Z/{p})"),
            Term::Kuzmin { n, p } => write!(f, "f_{n}^({p}) H_{n}(G; Z/{p})"),
            Term::OddPrimeKuzminSum { divisor_of, n } => write!(f, "⊕_{{odd p | {divisor_of}}} f_{n}^(p) H_{n}(G; Z/p)"),
            Term::SymHomology { degree, power } => write!(f, "H_{degree}(G; S^{power}(g))"),
            Term::Aug => write!(f, "g"),
            Term::SymAug(n) => write!(f, "S^{n}(g)"),
            Term::ExtAug(n) => write!(f, "Λ^{n}(g)"),
            Term::RationalSymCoinv { lo, hi } => write!(f, "⊕_{{{lo} <= j <= {hi}}} S^j_Q(g)_G"),
            Term::FreeSymCoinv(n) => write!(f, "F(S^{n}(g)_G)"),
            Term::AugTensorCube => write!(f, "(g ⊗_ZG g) ⊗ g"),
            Term::TorAb => write!(f, "Tor(G_ab, G_ab)"),
            Term::TorsionBounded(k) => write!(f, "t_{k}"),
            Term::Coker(s) => write!(f, "{s}"),
        }
    }
}

/// A formal direct sum; the empty sum is `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyExpr {
    pub terms: Vec<Term>,
}

impl HomologyExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn of(terms: Vec<Term>) -> Self {
        HomologyExpr { terms }
    }

    pub fn subst(&self, b: &Bindings) -> HomologyExpr {
        HomologyExpr { terms: self.terms.iter().flat_map(|t| t.subst(b)).collect() }
    }

    pub fn is_evaluable(&self) -> bool {
        self.terms.iter().all(Term::evaluable)
    }

    pub fn has_symbolic(&self) -> bool {
        self.terms.iter().any(|t| matches!(t, Term::Coker(_)))
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        for t in &self.terms {
            for e in t.indices() {
                e.vars(out);
            }
        }
    }
}

impl fmt::Display for HomologyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Serialize for HomologyExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Code(Code),
    Module(ModuleCode),
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Code(c) => write!(f, "{c}"),
            Pattern::Module(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TranslationRule {
    pub id: &'static str,
    pub pattern: Pattern,
    pub ring: RingPattern,
    pub limit: LimitPattern,
    pub hypotheses: Vec<Hypothesis>,
    pub rhs: HomologyExpr,
    /// A single computable term equal to the whole right-hand side, used to
    /// evaluate rows containing `t_k` summands.
    pub total: Option<Term>,
    /// The value is torsion of exponent dividing this number.
    pub exponent_divides: Option<Index>,
    pub paper_ref: &'static str,
    pub note: Option<&'static str>,
}

impl TranslationRule {
    /// Parameters anywhere in the rule.
    pub fn parameters(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.pattern_vars(&mut out);
        self.rhs.vars(&mut out);
        for h in &self.hypotheses {
            h.indices().iter().for_each(|e| e.vars(&mut out));
        }
        match &self.limit {
            LimitPattern::Eq(e) | LimitPattern::Ne(e) => e.vars(&mut out),
            LimitPattern::Any => {}
        }
        out
    }

    /// Parameters that matching can bind: pattern, ring and limit index.
    pub fn bindable(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.pattern_vars(&mut out);
        match &self.ring {
            RingPattern::Local(e) => e.vars(&mut out),
            RingPattern::InvertFactorial(e) => e.vars(&mut out),
            _ => {}
        }
        if let LimitPattern::Eq(e) = &self.limit {
            e.vars(&mut out);
        }
        out
    }

    /// A concrete query, ring and limit index covered by this rule for the
    /// given parameter values, with holes filled by `f`. `None` when a
    /// parameter condition fails or a value is missing.
    pub fn instance(&self, b: &Bindings) -> Option<(Query, Ring, u64)> {
        for h in &self.hypotheses {
            if !h.is_group_condition() && !matches!(h, Hypothesis::Assumed(_)) && h.check_parameters(b) != Some(true) {
                return None;
            }
        }
        let query = match &self.pattern {
            Pattern::Code(c) => {
                let c = c.subst(b, &Code::F);
                c.is_concrete().then_some(Query::Code(c))?
            }
            Pattern::Module(m) => {
                let m = m.subst(b);
                m.is_concrete().then_some(Query::Module(m))?
            }
        };
        let ring = match &self.ring {
            RingPattern::Exact(r) => *r,
            RingPattern::Local(p) => Ring::Local(p.eval_nat(b)?),
            RingPattern::InvertFactorial(n) => Ring::Inverted((2..=n.eval_nat(b)?).filter(|&p| is_prime(p)).product()),
            RingPattern::Any => Ring::Integers,
        };
        let i = match &self.limit {
            LimitPattern::Eq(e) => e.eval_nat(b)?,
            LimitPattern::Ne(e) => e.eval_nat(b)? + 1,
            LimitPattern::Any => 1,
        };
        Some((query, ring, i))
    }

    fn pattern_vars(&self, out: &mut BTreeSet<String>) {
        match &self.pattern {
            Pattern::Code(c) => c.vars(out),
            Pattern::Module(m) => m.vars(out),
        }
    }
}

struct Builder(TranslationRule);

fn ix(s: &str) -> Index {
    parse_index(s).unwrap_or_else(|e| panic!("rule index {s:?}: {e}"))
}

fn h(degree: &str) -> Term {
    Term::H { degree: ix(degree), coeff: Coeff::Z }
}

fn hp(degree: &str, p: &str) -> Term {
    Term::H { degree: ix(degree), coeff: Coeff::Mod(ix(p)) }
}

fn t(k: u64) -> Term {
    Term::TorsionBounded(Index::Num(k))
}

fn code(id: &'static str, pattern: &str) -> Builder {
    let c = parse_pattern(pattern).unwrap_or_else(|e| panic!("rule {id}: {e}"));
    Builder::new(id, Pattern::Code(c))
}

fn module(id: &'static str, pattern: &str) -> Builder {
    let c = parse_module_pattern(pattern).unwrap_or_else(|e| panic!("rule {id}: {e}"));
    Builder::new(id, Pattern::Module(c))
}

impl Builder {
    fn new(id: &'static str, pattern: Pattern) -> Self {
        Builder(TranslationRule {
            id,
            pattern,
            ring: RingPattern::Exact(Ring::Integers),
            limit: LimitPattern::Eq(Index::Num(1)),
            hypotheses: Vec::new(),
            rhs: HomologyExpr::zero(),
            total: None,
            exponent_divides: None,
            paper_ref: "",
            note: None,
        })
    }
    fn ring(mut self, r: RingPattern) -> Self {
        self.0.ring = r;
        self
    }
    fn lim(mut self, i: &str) -> Self {
        self.0.limit = LimitPattern::Eq(ix(i));
        self
    }
    fn lim_ne(mut self, i: &str) -> Self {
        self.0.limit = LimitPattern::Ne(ix(i));
        self
    }
    fn lim_any(mut self) -> Self {
        self.0.limit = LimitPattern::Any;
        self
    }
    fn hyp(mut self, hs: Vec<Hypothesis>) -> Self {
        self.0.hypotheses = hs;
        self
    }
    fn rhs(mut self, terms: Vec<Term>) -> Self {
        self.0.rhs = HomologyExpr::of(terms);
        self
    }
    fn total(mut self, term: Term) -> Self {
        self.0.total = Some(term);
        self
    }
    fn exponent(mut self, e: &str) -> Self {
        self.0.exponent_divides = Some(ix(e));
        self
    }
    fn refs(mut self, r: &'static str) -> Self {
        self.0.paper_ref = r;
        self
    }
    fn note(mut self, n: &'static str) -> Self {
        self.0.note = Some(n);
        self
    }
}

fn ptl(p: &str) -> Hypothesis {
    Hypothesis::PrimeTorsionless(ix(p))
}
fn ftl(n: &str) -> Hypothesis {
    Hypothesis::FactorialTorsionless(ix(n))
}
fn at_least(e: &str, k: i64) -> Hypothesis {
    Hypothesis::AtLeast(ix(e), k)
}

const REF_GRUENBERG: &str = "Gruenberg quotients: H_2n(G) = lim f/(r^n f + f r^n), n >= 2; H_2n+1(G) = lim f/(r^(n+1) + f r^n f), n >= 0; lim f/a = lim^1 a";
const REF_FR_EXAMPLES: &str = "fr-code examples: lim^1 rfr + frf and lim^2 rfr + frr";
const REF_VACUOUS: &str = "r_m are vacuous letters for m >= 2: lim^n r_m = g at (n, m) = (1, 1), 0 otherwise";
const REF_VACUOUS_PRODUCT: &str = "vacuous letters: lim^* a r_m b = 0 for finitary a, b with one of them flat";
const REF_TABLE: &str = "fr_inf table: lim^1 of Gruenberg codes in the letters r_m, s";
const REF_TABLE_ROW4: &str = "fr_inf table, odd Gruenberg code over Z[1/2]";
const REF_PAVUTNITSKIY: &str = "product example: lim^1 (ff + r)^2 = Tor(G_ab, G_ab) = lim^1 fff + rr";
const REF_LOCAL_LIM2: &str = "lim^2 over Z_(p) of Gruenberg codes in s";
const REF_RATIONAL: &str = "all lim^i over Q of Gruenberg codes in s for torsionless groups";
const REF_EX_TABLE: &str = "table of lim^i (Ex^n R_ab)_G for i = 0, 1 and n <= 7; t_k has exponent k";
const REF_EX_BASIC: &str = "lim^i (Ex^n R_ab ⊗ M)_G = H_{n-i}(G; S^n(g) ⊗ M), i = 0, 1, exponent dividing 2n(n-1)";
const REF_EX_MOD_TORSION: &str = "lim^i (Ex^n R_ab ⊗ M)_G ⊗ Z[1/n!] = F((S^n(g) ⊗ M)_G) at i = n, 0 otherwise";
const REF_EX_MOD_P: &str = "lim^i (Ex^{rp} R_ab)_G ⊗ Z_(p) = H_{r(p+2)-i}(G; Z/p)";
const REF_HRP: &str = "lim^i H_{rp}(F/gamma_2(R)) ⊗ Z_(p) = H_{r(p+2)-i}(G; Z/p), p odd";
const REF_KUZMIN: &str = "lim H_n(F/gamma_2(R)) ⊗ Z[1/2] = ⊕ f_n^(p) H_n(G; Z/p) over odd p | n";
const REF_RATIONAL_H: &str = "lim^i H_n(F/gamma_2(R)) ⊗ Q = S^n_Q(g)_G at i = n, 0 otherwise";
const REF_LIE: &str = "lim (Lie^p R_ab)_G = H_4(G; Z/p); for p = 2, lim (Lie^4 R_ab)_G = H_6(G; Z/2)";
const REF_TENSOR: &str = "lim^i (R_ab^{⊗n})_G = H_{2n-i}(G), 0 <= i < n";
const REF_KOSZUL: &str = "Koszul sequences for r -> f -> g: lim^n Ex^n(r) = S^n(g), lim^n Gamma^n(r) = Ex^n(g)";

fn build() -> Vec<TranslationRule> {
    use Hypothesis::*;
    let z12 = RingPattern::Exact(Ring::Inverted(2));
    let zp = RingPattern::Local(ix("p"));
    let q = RingPattern::Exact(Ring::Rationals);
    let mut out = vec![
        code("gruenberg_even", "r^n f + f r^n").hyp(vec![at_least("n", 2)]).rhs(vec![h("2*n")]).refs(REF_GRUENBERG),
        code("gruenberg_odd", "r^(n+1) + f r^n f").hyp(vec![at_least("n", 1)]).rhs(vec![h("2*n+1")]).refs(REF_GRUENBERG),
        code("gruenberg_odd_base", "r + f f").rhs(vec![h("1")]).refs(REF_GRUENBERG),
        code("fr_rfr_frf", "r f r + f r f")
            .rhs(vec![Term::Coker("coker{H_3(G) ⊗ G_ab -> H_2(G; g ⊗_ZG g)}")])
            .refs(REF_FR_EXAMPLES),
        code("fr_rfr_frr", "r f r + f r r").lim("2").rhs(vec![Term::AugTensorCube]).refs(REF_FR_EXAMPLES),
        code("letter_r_lim1", "r").ring(RingPattern::Any).rhs(vec![Term::Aug]).refs(REF_VACUOUS),
        code("letter_r_other", "r").ring(RingPattern::Any).lim_ne("1").refs(REF_VACUOUS),
        code("letter_vacuous", "r_m").ring(RingPattern::Any).lim_any().hyp(vec![at_least("m", 2)]).refs(REF_VACUOUS),
        code("vacuous_product", "a r_m b")
            .ring(RingPattern::Any)
            .lim_any()
            .hyp(vec![at_least("m", 2), Assumed("the outer factors are finitary and one of them is flat")])
            .refs(REF_VACUOUS_PRODUCT),
        code("table_lie_prime", "r_p f + f r_p").hyp(vec![Prime(ix("p")), ptl("p")]).rhs(vec![hp("4", "p")]).refs(REF_TABLE),
        code("table_lie_four", "r_4 f + f r_4")
            .hyp(vec![ptl("2")])
            .rhs(vec![hp("6", "2")])
            .refs(REF_TABLE)
            .note("the introductory summary writes Z/p here; the table and the Lie-power corollary give Z/2, which is used"),
        code("table_s_even", "s^n f + f s^n")
            .ring(z12.clone())
            .hyp(vec![at_least("n", 1), ftl("2*n")])
            .rhs(vec![Term::OddPrimeKuzminSum { divisor_of: ix("n"), n: ix("2*n") }])
            .refs(REF_TABLE),
        code("table_s_odd", "s^(n+1) + f s^n f")
            .ring(z12.clone())
            .hyp(vec![at_least("n", 1), ftl("2*n+1")])
            .rhs(vec![Term::OddPrimeKuzminSum { divisor_of: ix("n"), n: ix("2*n+1") }])
            .refs(REF_TABLE_ROW4)
            .note("encoded as stated, summing over odd p | n; the Kuz'min formula in degree 2n+1 would suggest odd p | 2n+1"),
        code("table_local_even", "s^(t*p/2) f + f s^(t*p/2)")
            .ring(zp.clone())
            .hyp(vec![OddPrime(ix("p")), Even(ix("t")), at_least("t", 1), Less(ix("t"), ix("p")), ftl("t*p")])
            .rhs(vec![hp("t*(p+2)", "p")])
            .refs(REF_TABLE),
        code("table_local_odd", "s^((t*p+1)/2) f + f s^((t*p-1)/2) f")
            .ring(zp.clone())
            .hyp(vec![OddPrime(ix("p")), Odd(ix("t")), at_least("t", 1), Less(ix("t"), ix("p")), ftl("t*p")])
            .rhs(vec![hp("t*(p+2)", "p")])
            .refs(REF_TABLE),
        code("table_local_square", "s^((p^2+1)/2) + f s^((p^2-1)/2) f")
            .ring(zp.clone())
            .hyp(vec![OddPrime(ix("p")), ftl("p")])
            .rhs(vec![hp("p^2+2", "p"), hp("p^2+2*p", "p")])
            .refs(REF_TABLE),
        code("pavutnitskiy_square", "(f f + r)^2").rhs(vec![Term::TorAb]).refs(REF_PAVUTNITSKIY),
        code("pavutnitskiy_cubic", "f f f + r r").rhs(vec![Term::TorAb]).refs(REF_PAVUTNITSKIY),
        code("local_lim2_even", "s^(t*p/2) f + f s^(t*p/2)")
            .ring(zp.clone())
            .lim("2")
            .hyp(vec![OddPrime(ix("p")), Even(ix("t")), at_least("t", 1), Less(ix("t"), ix("p")), ftl("t*p")])
            .rhs(vec![hp("t*(p+2)-1", "p")])
            .refs(REF_LOCAL_LIM2),
        code("local_lim2_odd", "s^((t*p+1)/2) f + f s^((t*p-1)/2) f")
            .ring(zp.clone())
            .lim("2")
            .hyp(vec![OddPrime(ix("p")), Odd(ix("t")), at_least("t", 1), Less(ix("t"), ix("p")), ftl("t*p")])
            .rhs(vec![hp("t*(p+2)-1", "p")])
            .refs(REF_LOCAL_LIM2),
        code("rational_s_even", "s^k f + f s^k")
            .ring(q.clone())
            .lim("2*k+1")
            .hyp(vec![at_least("k", 1), TorsionFree])
            .rhs(vec![Term::RationalSymCoinv { lo: ix("2"), hi: ix("2*k") }])
            .refs(REF_RATIONAL),
        code("rational_s_even_other", "s^k f + f s^k")
            .ring(q.clone())
            .lim_ne("2*k+1")
            .hyp(vec![at_least("k", 1), TorsionFree])
            .refs(REF_RATIONAL),
        code("rational_s_odd", "s^k + f s^(k-1) f")
            .ring(q.clone())
            .lim("2*k")
            .hyp(vec![at_least("k", 2), TorsionFree])
            .rhs(vec![Term::RationalSymCoinv { lo: ix("2"), hi: ix("2*k-1") }])
            .refs(REF_RATIONAL),
        code("rational_s_odd_other", "s^k + f s^(k-1) f")
            .ring(q.clone())
            .lim_ne("2*k")
            .hyp(vec![at_least("k", 2), TorsionFree])
            .refs(REF_RATIONAL),
        code("rational_s_odd_base", "s + f f").ring(q.clone()).lim_any().hyp(vec![TorsionFree]).refs(REF_RATIONAL),
        module("relation_coinv_lim", "coinv(R)").lim("0").rhs(vec![h("2")]).refs(REF_EX_TABLE),
        module("relation_coinv_lim1", "coinv(R)").rhs(vec![h("1")]).refs(REF_EX_TABLE),
    ];
    // Rows n = 2..7 of the exterior power table, for i = 0 and i = 1.
    let table: [(u64, Vec<Term>, Vec<Term>); 6] = [
        (2, vec![hp("4", "2")], vec![hp("3", "2")]),
        (3, vec![t(2), hp("5", "3")], vec![t(2), hp("4", "3")]),
        (4, vec![t(3), hp("6", "2"), hp("8", "2")], vec![t(2), t(3)]),
        (5, vec![t(2), hp("7", "5")], vec![t(2), hp("6", "5")]),
        (6, vec![t(2), t(5), hp("10", "3")], vec![t(2), t(5), hp("9", "3")]),
        (7, vec![t(2), t(3), hp("9", "7")], vec![t(2), t(3), hp("8", "7")]),
    ];
    const IDS: [[&str; 2]; 6] = [
        ["ex_table_2_lim", "ex_table_2_lim1"],
        ["ex_table_3_lim", "ex_table_3_lim1"],
        ["ex_table_4_lim", "ex_table_4_lim1"],
        ["ex_table_5_lim", "ex_table_5_lim1"],
        ["ex_table_6_lim", "ex_table_6_lim1"],
        ["ex_table_7_lim", "ex_table_7_lim1"],
    ];
    for (row, (n, lim0, lim1)) in table.into_iter().enumerate() {
        for (i, rhs) in [lim0, lim1].into_iter().enumerate() {
            let pattern = format!("coinv(Ex^{n}(R))");
            out.push(
                module(IDS[row][i], &pattern)
                    .lim(&i.to_string())
                    .hyp(vec![ftl(&n.to_string())])
                    .rhs(rhs)
                    .total(Term::SymHomology { degree: Index::Num(n - i as u64), power: Index::Num(n) })
                    .refs(REF_EX_TABLE),
            );
        }
    }
    out.extend([
        module("ex_basic", "coinv(Ex^n(R))")
            .lim("i")
            .hyp(vec![at_least("n", 2), AtMost(ix("i"), 1), ftl("n")])
            .rhs(vec![Term::SymHomology { degree: ix("n-i"), power: ix("n") }])
            .exponent("2*n*(n-1)")
            .refs(REF_EX_BASIC),
        module("ex_mod_torsion_top", "coinv(Ex^n(R))")
            .ring(RingPattern::InvertFactorial(ix("n")))
            .lim("n")
            .hyp(vec![at_least("n", 2), ftl("n")])
            .rhs(vec![Term::FreeSymCoinv(ix("n"))])
            .refs(REF_EX_MOD_TORSION),
        module("ex_mod_torsion_lower", "coinv(Ex^n(R))")
            .ring(RingPattern::InvertFactorial(ix("n")))
            .lim("i")
            .hyp(vec![at_least("n", 2), Less(ix("i"), ix("n")), ftl("n")])
            .refs(REF_EX_MOD_TORSION),
        module("ex_local", "coinv(Ex^(t*p)(R))")
            .ring(zp.clone())
            .lim("i")
            .hyp(vec![Prime(ix("p")), at_least("t", 1), Less(ix("t"), ix("p")), AtMost(ix("i"), 1), ftl("t*p")])
            .rhs(vec![hp("t*(p+2)-i", "p")])
            .refs(REF_EX_MOD_P),
        module("ex_local_square", "coinv(Ex^(p^2)(R))")
            .ring(zp.clone())
            .lim("0")
            .hyp(vec![Prime(ix("p")), ftl("p^2")])
            .rhs(vec![hp("p^2+2", "p"), hp("p^2+2*p", "p")])
            .refs(REF_EX_MOD_P),
        module("metabelian_local", "H_(t*p)(F/gamma_2(R))")
            .ring(zp.clone())
            .lim("i")
            .hyp(vec![OddPrime(ix("p")), at_least("t", 1), Less(ix("t"), ix("p")), AtMost(ix("i"), 1), ftl("t*p")])
            .rhs(vec![hp("t*(p+2)-i", "p")])
            .refs(REF_HRP),
        module("metabelian_local_square", "H_(p^2)(F/gamma_2(R))")
            .ring(zp.clone())
            .lim("0")
            .hyp(vec![OddPrime(ix("p")), ftl("p^2")])
            .rhs(vec![hp("p^2+2", "p"), hp("p^2+2*p", "p")])
            .refs(REF_HRP),
        module("metabelian_kuzmin", "H_n(F/gamma_2(R))")
            .ring(z12)
            .lim("0")
            .hyp(vec![at_least("n", 2), ftl("n")])
            .rhs(vec![Term::OddPrimeKuzminSum { divisor_of: ix("n"), n: ix("n") }])
            .refs(REF_KUZMIN),
        module("metabelian_rational", "H_n(F/gamma_2(R))")
            .ring(q.clone())
            .lim("n")
            .hyp(vec![at_least("n", 2), ftl("n")])
            .rhs(vec![Term::RationalSymCoinv { lo: ix("n"), hi: ix("n") }])
            .refs(REF_RATIONAL_H),
        module("metabelian_rational_other", "H_n(F/gamma_2(R))")
            .ring(q)
            .lim_ne("n")
            .hyp(vec![at_least("n", 2), ftl("n")])
            .refs(REF_RATIONAL_H),
        module("lie_prime", "coinv(Lie^p(R))").lim("0").hyp(vec![Prime(ix("p")), ptl("p")]).rhs(vec![hp("4", "p")]).refs(REF_LIE),
        module("lie_four", "coinv(Lie^4(R))").lim("0").hyp(vec![ptl("2")]).rhs(vec![hp("6", "2")]).refs(REF_LIE),
        module("tensor_power", "coinv(T^n(R))")
            .lim("i")
            .hyp(vec![at_least("n", 1), Less(ix("i"), ix("n"))])
            .rhs(vec![h("2*n-i")])
            .refs(REF_TENSOR),
        module("koszul_ext", "Ex^n(r)").lim("n").rhs(vec![Term::SymAug(ix("n"))]).refs(REF_KOSZUL),
        module("koszul_ext_other", "Ex^n(r)").lim_ne("n").refs(REF_KOSZUL),
        module("koszul_gamma", "Gamma^n(r)").lim("n").rhs(vec![Term::ExtAug(ix("n"))]).refs(REF_KOSZUL),
        module("koszul_gamma_other", "Gamma^n(r)").lim_ne("n").refs(REF_KOSZUL),
    ]);
    out.into_iter().map(|b| b.0).collect()
}

/// The immutable rule base.
pub fn rule_base() -> &'static [TranslationRule] {
    static RULES: OnceLock<Vec<TranslationRule>> = OnceLock::new();
    RULES.get_or_init(build)
}

pub fn rule_by_id(id: &str) -> Option<&'static TranslationRule> {
    rule_base().iter().find(|r| r.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_unique_and_parameters_bound() {
        let rules = rule_base();
        let ids: BTreeSet<&str> = rules.iter().map(|r| r.id).collect();
        assert_eq!(ids.len(), rules.len());
        for r in rules {
            let bindable = r.bindable();
            for v in r.parameters() {
                assert!(bindable.contains(&v), "{}: parameter {v} is never bound", r.id);
            }
            assert!(!r.paper_ref.is_empty(), "{}", r.id);
        }
    }

    #[test]
    fn ring_parsing() {
        assert_eq!("Z12".parse::<Ring>().unwrap(), Ring::Inverted(2));
        assert_eq!("Zp:3".parse::<Ring>().unwrap(), Ring::Local(3));
        assert!("Zp:4".parse::<Ring>().is_err());
        assert_eq!("Zinv:6".parse::<Ring>().unwrap().to_string(), "Zinv:6");
        let a = AbelianInvariants::from_i64(1, &[6]);
        assert_eq!(Ring::Inverted(2).apply(&a).unwrap(), AbelianInvariants::from_i64(1, &[3]));
        assert_eq!(Ring::Local(2).apply(&a).unwrap(), AbelianInvariants::from_i64(1, &[2]));
        assert_eq!(Ring::Rationals.apply(&a).unwrap(), AbelianInvariants::free(1));
    }

    #[test]
    fn invert_factorial_matching() {
        let pat = RingPattern::InvertFactorial(ix("n"));
        let b3: Bindings = [("n".to_string(), 3)].into();
        assert!(pat.post_check(Ring::Inverted(6), &b3));
        assert!(!pat.post_check(Ring::Inverted(2), &b3));
        let b2: Bindings = [("n".to_string(), 2)].into();
        assert!(pat.post_check(Ring::Inverted(2), &b2));
    }
}
