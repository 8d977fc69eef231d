use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::element::{word_count, words_up_to};
use super::ideal::code_span;
use super::testmap::{describe, MapEvaluator, TestMap, WordContext};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::frlang::Code;
use crate::group::{PresentedGroup, Word};
use crate::linalg::{kernel_basis, subquotient, AbelianInvariants, Matrix};

/// Integer row echelon form over a fixed sequence of coordinate blocks.
/// Block widths grow as new coordinates appear.
struct Echelon {
    rows: Vec<Vec<Vec<i128>>>,
    pivots: HashMap<(usize, usize), usize>,
    seen: HashSet<Vec<(usize, usize, i64)>>,
}

fn overflow() -> Error {
    Error::Internal("coefficient overflow in truncated quotient".into())
}

fn leading(v: &[Vec<i128>]) -> Option<(usize, usize)> {
    for (b, block) in v.iter().enumerate() {
        if let Some(i) = block.iter().position(|&c| c != 0) {
            return Some((b, i));
        }
    }
    None
}

/// `alpha * x + beta * y`.
fn combine(alpha: i128, x: &[Vec<i128>], beta: i128, y: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    x.iter()
        .zip(y)
        .map(|(bx, by)| {
            let n = bx.len().max(by.len());
            (0..n)
                .map(|i| {
                    let a = bx.get(i).copied().unwrap_or(0);
                    let b = by.get(i).copied().unwrap_or(0);
                    alpha
                        .checked_mul(a)
                        .and_then(|p| beta.checked_mul(b).and_then(|q| p.checked_add(q)))
                        .ok_or_else(overflow)
                })
                .collect()
        })
        .collect()
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: HashMap::new(), seen: HashSet::new() }
    }

    fn insert(&mut self, parts: &[Vec<(usize, i64)>]) -> Result<()> {
        let key: Vec<(usize, usize, i64)> =
            parts.iter().enumerate().flat_map(|(b, p)| p.iter().map(move |&(i, c)| (b, i, c))).collect();
        if key.is_empty() || !self.seen.insert(key) {
            return Ok(());
        }
        let mut v: Vec<Vec<i128>> = parts
            .iter()
            .map(|p| {
                let mut d = vec![0i128; p.iter().map(|&(i, _)| i + 1).max().unwrap_or(0)];
                for &(i, c) in p {
                    d[i] = c as i128;
                }
                d
            })
            .collect();
        while let Some(p) = leading(&v) {
            let Some(&r) = self.pivots.get(&p) else {
                if v[p.0][p.1] < 0 {
                    v = combine(-1, &v, 0, &v)?;
                }
                self.pivots.insert(p, self.rows.len());
                self.rows.push(v);
                return Ok(());
            };
            let a = self.rows[r][p.0][p.1];
            let c = v[p.0][p.1];
            if c % a == 0 {
                v = combine(1, &v, -(c / a), &self.rows[r])?;
            } else {
                let e = a.extended_gcd(&c);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let row = combine(s, &self.rows[r], t, &v)?;
                v = combine(a / g, &v, -(c / g), &self.rows[r])?;
                self.rows[r] = row;
            }
        }
        Ok(())
    }

    /// Rows vanishing on the blocks before `from`, restricted to blocks `from..`.
    fn tail(&self, from: usize) -> Vec<(usize, Vec<Vec<i128>>)> {
        let mut out: Vec<(usize, Vec<Vec<i128>>)> = self
            .pivots
            .iter()
            .filter(|(p, _)| p.0 >= from)
            .map(|(p, &r)| (p.0, self.rows[r][from..].to_vec()))
            .collect();
        out.sort_by_key(|(b, _)| *b);
        out
    }
}

fn to_big(block: &[i128], dim: usize) -> Vec<BigInt> {
    (0..dim).map(|i| BigInt::from(block.get(i).copied().unwrap_or(0))).collect()
}

fn sparse_to_big(v: &[(usize, i64)], dim: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); dim];
    for &(i, c) in v {
        out[i] = BigInt::from(c);
    }
    out
}

/// Invariants of the quotient at each truncation level, and whether they settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub group: String,
    pub numerator: String,
    pub denominator: String,
    pub engine: &'static str,
    pub levels: BTreeMap<usize, AbelianInvariants>,
    pub stable: bool,
    /// Present only when the last two levels agree.
    pub value: Option<AbelianInvariants>,
}

fn flatten_sum(code: &Code) -> Vec<Code> {
    match code {
        Code::Sum(xs) => xs.iter().flat_map(flatten_sum).collect(),
        other => vec![other.clone()],
    }
}

/// `N_L / D_L` for `N_L = num ∩ Z[W_L]` and `D_L` the sum of the truncated
/// summands of `den`. Errors with [`Error::NotContained`] if some summand
/// leaves the numerator.
pub fn truncated_quotient(num: &Code, den: &Code, pg: &PresentedGroup, level: usize, caps: &Caps) -> Result<AbelianInvariants> {
    let (levels, _) = quotient_levels(num, den, pg, level, level, caps)?;
    Ok(levels.into_values().next().expect("one level"))
}

/// Truncated quotients for `L` in `l_min..=l_max`; stable when the last two agree.
pub fn stabilized_quotient(
    num: &Code,
    den: &Code,
    pg: &PresentedGroup,
    l_min: usize,
    l_max: usize,
    caps: &Caps,
) -> Result<QuotientReport> {
    if l_min > l_max {
        return Err(Error::Invalid(format!("l_min {l_min} exceeds l_max {l_max}")));
    }
    let (levels, engine) = quotient_levels(num, den, pg, l_min, l_max, caps)?;
    let values: Vec<&AbelianInvariants> = levels.values().collect();
    let stable = values.len() >= 2 && values[values.len() - 1] == values[values.len() - 2];
    Ok(QuotientReport {
        group: pg.name().to_string(),
        numerator: num.to_string(),
        denominator: den.to_string(),
        engine,
        value: stable.then(|| values[values.len() - 1].clone()),
        levels,
        stable,
    })
}

type Levels = BTreeMap<usize, AbelianInvariants>;

fn quotient_levels(num: &Code, den: &Code, pg: &PresentedGroup, l_min: usize, l_max: usize, caps: &Caps) -> Result<(Levels, &'static str)> {
    if !num.is_concrete() || !den.is_concrete() {
        return Err(Error::Invalid("quotients need concrete codes".into()));
    }
    let k = pg.generator_count();
    let n = word_count(k, l_max);
    if n > caps.max_monomials {
        return Err(Error::cap("words in truncation", n, caps.max_monomials));
    }
    let summands = flatten_sum(den);
    match describe(num) {
        Some(t_num) if summands.iter().any(|d| describe(d).is_some()) => {
            Ok((test_map_levels(t_num, &summands, pg, l_min, l_max, caps)?, "test-map"))
        }
        t_num => Ok((dense_levels(num, t_num, den, pg, l_min, l_max, caps)?, "dense")),
    }
}

enum Summand {
    Exact(MapEvaluator, Echelon),
    Spanned(Code),
}

fn test_map_levels(t_num: TestMap, summands: &[Code], pg: &PresentedGroup, l_min: usize, l_max: usize, caps: &Caps) -> Result<Levels> {
    let ctx = WordContext::new(pg);
    let first = summands.iter().position(|d| describe(d).is_some()).expect("a describable summand");
    let mut num = MapEvaluator::new(t_num);
    let mut phi = MapEvaluator::new(describe(&summands[first]).unwrap());
    // Blocks (N, φ): φ(N_L). Blocks (φ, N): containment of the first summand.
    let mut e_num = Echelon::new();
    let mut e_first = Echelon::new();
    let mut others: Vec<Summand> = summands
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != first)
        .map(|(_, d)| match describe(d) {
            Some(t) => Summand::Exact(MapEvaluator::new(t), Echelon::new()),
            None => Summand::Spanned(d.clone()),
        })
        .collect();
    let words = words_up_to(pg.generator_count(), l_max);
    let mut out = BTreeMap::new();
    let mut start = 0;
    for level in 0..=l_max {
        let end = words[start..].iter().position(|w| w.len() > level).map_or(words.len(), |p| start + p);
        for w in &words[start..end] {
            let tn = num.eval_word(&ctx, w.letters());
            let tp = phi.eval_word(&ctx, w.letters());
            e_num.insert(&[tn.clone(), tp.clone()])?;
            e_first.insert(&[tp.clone(), tn.clone()])?;
            for s in others.iter_mut() {
                if let Summand::Exact(ev, e) = s {
                    let td = ev.eval_word(&ctx, w.letters());
                    e.insert(&[td, tn.clone(), tp.clone()])?;
                }
            }
        }
        start = end;
        if level < l_min {
            continue;
        }
        let mut rel: Vec<Vec<BigInt>> = Vec::new();
        let dim_n = num.dim();
        for (b, row) in e_first.tail(1) {
            debug_assert_eq!(b, 1);
            return Err(Error::NotContained { level, witness: to_big(&row[0], dim_n) });
        }
        let mut spanned: Vec<Vec<(usize, i64)>> = Vec::new();
        for s in &others {
            match s {
                Summand::Exact(_, e) => {
                    for (b, row) in e.tail(1) {
                        if b == 1 {
                            return Err(Error::NotContained { level, witness: to_big(&row[0], dim_n) });
                        }
                        rel.push(row[1].clone().into_iter().map(BigInt::from).collect());
                    }
                }
                Summand::Spanned(code) => {
                    for el in code_span(code, pg, level, caps)?.elements {
                        let tn = num.eval_element(&ctx, &el);
                        if !tn.is_empty() {
                            return Err(Error::NotContained { level, witness: sparse_to_big(&tn, num.dim()) });
                        }
                        spanned.push(phi.eval_element(&ctx, &el));
                    }
                }
            }
        }
        let dim = phi.dim();
        for v in &mut rel {
            v.resize(dim, BigInt::from(0));
        }
        rel.extend(spanned.iter().map(|p| sparse_to_big(p, dim)));
        let sub: Vec<Vec<BigInt>> = e_num.tail(1).into_iter().map(|(_, row)| to_big(&row[0], dim)).collect();
        let q = subquotient(dim, &Matrix::from_columns(dim, &sub), &Matrix::from_columns(dim, &rel)).map_err(|e| match e {
            Error::RelationsEscape { witness, .. } => Error::NotContained { level, witness },
            other => other,
        })?;
        out.insert(level, q);
    }
    Ok(out)
}

fn dense_levels(
    num: &Code,
    t_num: Option<TestMap>,
    den: &Code,
    pg: &PresentedGroup,
    l_min: usize,
    l_max: usize,
    caps: &Caps,
) -> Result<Levels> {
    let ctx = WordContext::new(pg);
    let mut out = BTreeMap::new();
    for level in l_min..=l_max {
        let words = words_up_to(pg.generator_count(), level);
        let dim = words.len();
        if dim > caps.max_dense_dim {
            return Err(Error::cap("dense truncation dimension", dim, caps.max_dense_dim));
        }
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let column = |e: &super::FreeRingElement| -> Result<Vec<BigInt>> {
            let mut v = vec![BigInt::from(0); dim];
            for (w, c) in e.terms() {
                let i = *index.get(w).ok_or_else(|| Error::Internal(format!("word {w} beyond level {level}")))?;
                v[i] = c.clone();
            }
            Ok(v)
        };
        let sub = match &t_num {
            Some(t) => {
                let mut ev = MapEvaluator::new(t.clone());
                let images: Vec<Vec<(usize, i64)>> = words.iter().map(|w| ev.eval_word(&ctx, w.letters())).collect();
                let rows = ev.dim();
                let mut m = Matrix::<BigInt>::zeros(rows, dim);
                for (j, img) in images.iter().enumerate() {
                    for &(i, c) in img {
                        m[(i, j)] = BigInt::from(c);
                    }
                }
                kernel_basis(&m)
            }
            None => {
                let cols = code_span(num, pg, level, caps)?.elements.iter().map(&column).collect::<Result<Vec<_>>>()?;
                Matrix::from_columns(dim, &cols)
            }
        };
        let rel = code_span(den, pg, level, caps)?.elements.iter().map(&column).collect::<Result<Vec<_>>>()?;
        let q = subquotient(dim, &sub, &Matrix::from_columns(dim, &rel)).map_err(|e| match e {
            Error::RelationsEscape { witness, .. } => Error::NotContained { level, witness },
            other => other,
        })?;
        out.insert(level, q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frlang::parse;

    fn klein() -> PresentedGroup {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/c2c2.json");
        PresentedGroup::from_file(&path, &Caps::default()).unwrap()
    }

    #[test]
    fn hopf_on_small_groups() {
        let caps = Caps::default();
        let num = parse("r ∩ f f").unwrap();
        let den = parse("r f + f r").unwrap();
        let rep = stabilized_quotient(&num, &den, &klein(), 4, 6, &caps).unwrap();
        assert!(rep.stable, "{rep:?}");
        assert_eq!(rep.value, Some(AbelianInvariants::cyclic(2)));
        let c3 = PresentedGroup::cyclic(3, &caps).unwrap();
        let rep = stabilized_quotient(&num, &den, &c3, 4, 8, &caps).unwrap();
        assert_eq!(rep.value, Some(AbelianInvariants::zero()));
    }

    #[test]
    fn metabelian_example_vanishes() {
        let caps = Caps::default();
        let num = parse("r_2 ∩ f f").unwrap();
        let den = parse("r_2 f + f r_2").unwrap();
        for m in 2..=4 {
            let pg = PresentedGroup::cyclic(m, &caps).unwrap();
            let rep = stabilized_quotient(&num, &den, &pg, 6, 10, &caps).unwrap();
            assert_eq!(rep.value, Some(AbelianInvariants::zero()), "m = {m}: {rep:?}");
        }
    }

    #[test]
    fn dense_agrees_with_test_maps() {
        let caps = Caps::default();
        let c2 = PresentedGroup::cyclic(2, &caps).unwrap();
        let num = parse("r ∩ f f").unwrap();
        let den = parse("r f + f r").unwrap();
        let fast = quotient_levels(&num, &den, &c2, 4, 6, &caps).unwrap().0;
        let slow = dense_levels(&num, describe(&num), &den, &c2, 4, 6, &caps).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn escape_is_reported() {
        let caps = Caps::default();
        let c3 = PresentedGroup::cyclic(3, &caps).unwrap();
        let err = truncated_quotient(&parse("f f").unwrap(), &parse("r").unwrap(), &c3, 4, &caps).unwrap_err();
        assert!(matches!(err, Error::NotContained { .. }), "{err}");
    }
}
