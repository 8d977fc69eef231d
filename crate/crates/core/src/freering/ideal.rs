use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use super::element::{word_count, words_up_to, FreeRingElement};
use super::testmap::WordContext;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::frlang::Code;
use crate::group::{Letter, PresentedGroup, Word};
use crate::linalg::{Lattice, Matrix};

/// Generators of the truncation of an ideal to words of length at most `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpan {
    pub level: usize,
    pub elements: Vec<FreeRingElement>,
    pub code: Code,
}

/// Left-normed commutators `[s_1, ..., s_j]` of weight `j >= m` in the
/// Schreier generators and their inverses, of reduced length at most
/// `max_len`. For `m = 1` these are the Schreier generators themselves.
pub fn gamma_generators(pg: &PresentedGroup, m: usize, max_len: usize) -> Vec<Word> {
    let gens: Vec<Word> = pg.schreier().generators.into_iter().filter(|s| s.len() <= max_len).collect();
    if m <= 1 {
        return gens;
    }
    let signed: Vec<Word> = gens.iter().flat_map(|s| [s.clone(), s.inverse()]).collect();
    let mut out = BTreeSet::new();
    let mut layer: BTreeSet<Word> = signed.iter().cloned().collect();
    for weight in 2..=max_len.max(2) {
        let mut next = BTreeSet::new();
        for c in &layer {
            for s in &signed {
                let w = Word::commutator(c, s);
                if !w.is_empty() && w.len() <= max_len {
                    next.insert(w);
                }
            }
        }
        if weight >= m {
            out.extend(next.iter().cloned());
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    out.into_iter().collect()
}

/// Spanning set of `code ∩ Z[W_L]`, `W_L` the reduced words of length at most `L`.
///
/// `f`, `r` and `r_2` are spanned exactly by differences of words with equal
/// images. `r_m` for `m >= 3` uses commutators from [`gamma_generators`] with
/// multipliers on both sides. Products split `L` between the factors, sums
/// take unions and intersections are computed in the word lattice.
pub fn code_span(code: &Code, pg: &PresentedGroup, level: usize, caps: &Caps) -> Result<IdealSpan> {
    let ctx = WordContext::new(pg);
    let elements = span(code, &ctx, level, caps)?;
    Ok(IdealSpan { level, elements, code: code.clone() })
}

fn check_words(k: usize, level: usize, caps: &Caps) -> Result<()> {
    let n = word_count(k, level);
    if n > caps.max_monomials {
        return Err(Error::cap("words in truncation", n, caps.max_monomials));
    }
    Ok(())
}

fn dedup(elements: Vec<FreeRingElement>, caps: &Caps) -> Result<Vec<FreeRingElement>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in elements {
        if !e.is_zero() && seen.insert(e.clone()) {
            out.push(e);
        }
    }
    if out.len() > caps.max_monomials {
        return Err(Error::cap("span size", out.len(), caps.max_monomials));
    }
    Ok(out)
}

fn classes(ctx: &WordContext, level: usize, caps: &Caps, key: impl Fn(&[Letter]) -> Vec<i64>) -> Result<Vec<FreeRingElement>> {
    check_words(ctx.pg.generator_count(), level, caps)?;
    let mut reps: HashMap<Vec<i64>, Word> = HashMap::new();
    let mut out = Vec::new();
    for w in words_up_to(ctx.pg.generator_count(), level) {
        let kk = key(w.letters());
        match reps.get(&kk) {
            Some(rep) => out.push(FreeRingElement::word(w).sub(&FreeRingElement::word(rep.clone()))),
            None => {
                reps.insert(kk, w);
            }
        }
    }
    Ok(out)
}

fn span(code: &Code, ctx: &WordContext, level: usize, caps: &Caps) -> Result<Vec<FreeRingElement>> {
    let k = ctx.pg.generator_count();
    let out = match code {
        Code::F => {
            check_words(k, level, caps)?;
            words_up_to(k, level).iter().skip(1).map(FreeRingElement::word_minus_one).collect()
        }
        Code::R(m) => match m.as_num() {
            Some(0) | Some(1) => classes(ctx, level, caps, |w| vec![ctx.element_of(w) as i64])?,
            Some(2) => classes(ctx, level, caps, |w| ctx.metabelian_key(w))?,
            Some(m) => commutator_span(ctx, m as usize, level, caps)?,
            None => return Err(Error::Invalid(format!("symbolic index in {code}"))),
        },
        Code::Hole(h) => return Err(Error::Invalid(format!("pattern hole {h} in a concrete code"))),
        Code::Pow(base, e) => {
            let e = e.as_num().ok_or_else(|| Error::Invalid(format!("symbolic exponent in {code}")))?;
            product(&vec![(**base).clone(); e as usize], ctx, level, caps)?
        }
        Code::Prod(xs) => product(xs, ctx, level, caps)?,
        Code::Sum(xs) => {
            let mut all = Vec::new();
            for x in xs {
                all.extend(span(x, ctx, level, caps)?);
            }
            all
        }
        Code::Inter(xs) => {
            let mut parts = Vec::new();
            for x in xs {
                parts.push(span(x, ctx, level, caps)?);
            }
            intersect(&parts, caps)?
        }
    };
    dedup(out, caps)
}

/// Lengths `L_i` with `Σ L_i = L`, the remainder going to the last factors.
pub(crate) fn split_levels(level: usize, n: usize) -> Vec<usize> {
    let base = level / n;
    let extra = level % n;
    (0..n).map(|i| base + usize::from(i >= n - extra)).collect()
}

fn product(xs: &[Code], ctx: &WordContext, level: usize, caps: &Caps) -> Result<Vec<FreeRingElement>> {
    if xs.is_empty() {
        return Ok(vec![FreeRingElement::one()]);
    }
    let levels = split_levels(level, xs.len());
    let mut acc = vec![FreeRingElement::one()];
    for (x, l) in xs.iter().zip(levels) {
        let part = span(x, ctx, l, caps)?;
        let size = acc.len().saturating_mul(part.len());
        if size > caps.max_monomials {
            return Err(Error::cap("span size", size, caps.max_monomials));
        }
        let mut next = Vec::with_capacity(size);
        for a in &acc {
            for b in &part {
                next.push(a.try_mul(b, caps.max_monomials)?);
            }
        }
        acc = dedup(next, caps)?;
    }
    Ok(acc)
}

fn commutator_span(ctx: &WordContext, m: usize, level: usize, caps: &Caps) -> Result<Vec<FreeRingElement>> {
    let k = ctx.pg.generator_count();
    let gens = gamma_generators(ctx.pg, m, level);
    let mut out = Vec::new();
    for c in gens {
        let budget = level - c.len();
        check_words(k, budget, caps)?;
        let cm1 = FreeRingElement::word_minus_one(&c);
        let words = words_up_to(k, budget);
        for u in &words {
            for v in words.iter().take_while(|v| v.len() + u.len() <= budget) {
                out.push(FreeRingElement::word(u.clone()).mul(&cm1).mul(&FreeRingElement::word(v.clone())));
                if out.len() > caps.max_monomials {
                    return Err(Error::cap("span size", out.len(), caps.max_monomials));
                }
            }
        }
    }
    Ok(out)
}

fn intersect(parts: &[Vec<FreeRingElement>], caps: &Caps) -> Result<Vec<FreeRingElement>> {
    let mut index: BTreeMap<Word, usize> = BTreeMap::new();
    for p in parts {
        for e in p {
            for (w, _) in e.terms() {
                let n = index.len();
                index.entry(w.clone()).or_insert(n);
            }
        }
    }
    let dim = index.len();
    if dim > caps.max_dense_dim {
        return Err(Error::cap("intersection dimension", dim, caps.max_dense_dim));
    }
    let to_lattice = |p: &Vec<FreeRingElement>| {
        let cols: Vec<Vec<BigInt>> = p
            .iter()
            .map(|e| {
                let mut v = vec![BigInt::zero(); dim];
                for (w, c) in e.terms() {
                    v[index[w]] = c.clone();
                }
                v
            })
            .collect();
        Lattice::from_columns(&Matrix::from_columns(dim, &cols))
    };
    let mut acc = to_lattice(&parts[0]);
    for p in &parts[1..] {
        acc = acc.intersect(&to_lattice(p));
    }
    let words: Vec<&Word> = {
        let mut ws: Vec<(&Word, usize)> = index.iter().map(|(w, &i)| (w, i)).collect();
        ws.sort_by_key(|&(_, i)| i);
        ws.into_iter().map(|(w, _)| w).collect()
    };
    let basis = acc.basis_columns();
    Ok(basis
        .columns()
        .into_iter()
        .map(|col| {
            FreeRingElement::from_terms(col.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (words[i].clone(), c)))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frlang::parse;

    #[test]
    fn gamma_on_cyclic() {
        let caps = Caps::default();
        let pg = PresentedGroup::cyclic(2, &caps).unwrap();
        assert_eq!(gamma_generators(&pg, 1, 10), vec![Word::power_of(0, 2)]);
        assert!(gamma_generators(&pg, 2, 10).is_empty());
    }

    #[test]
    fn split() {
        assert_eq!(split_levels(10, 2), vec![5, 5]);
        assert_eq!(split_levels(7, 2), vec![3, 4]);
        assert_eq!(split_levels(10, 3), vec![3, 3, 4]);
    }

    #[test]
    fn spans_augment_to_zero() {
        let caps = Caps::default();
        let pg = PresentedGroup::cyclic(3, &caps).unwrap();
        // R is cyclic here, so r_2 vanishes.
        assert!(code_span(&parse("r_2").unwrap(), &pg, 8, &caps).unwrap().elements.is_empty());
        for code in ["f", "r", "r f + f r", "r ∩ f f", "f r f"] {
            let s = code_span(&parse(code).unwrap(), &pg, 6, &caps).unwrap();
            assert!(!s.elements.is_empty(), "{code}");
            assert!(s.elements.iter().all(|e| e.augmentation().is_zero()), "{code}");
        }
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/c2c2.json");
        let klein = PresentedGroup::from_file(&path, &caps).unwrap();
        let s = code_span(&parse("r_2").unwrap(), &klein, 8, &caps).unwrap();
        assert!(!s.elements.is_empty());
        assert!(s.elements.iter().all(|e| e.project(&klein).unwrap().iter().all(|c| c.is_zero())));
    }
}
