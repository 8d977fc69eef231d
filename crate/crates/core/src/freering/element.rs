use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Letter, PresentedGroup, Word};

/// An element of the integral free group ring: reduced words with nonzero
/// integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeRingElement {
    terms: BTreeMap<Word, BigInt>,
}

impl FreeRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Word::identity())
    }

    pub fn word(w: Word) -> Self {
        Self::monomial(w, BigInt::one())
    }

    pub fn monomial(w: Word, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        FreeRingElement { terms }
    }

    /// `w - 1`.
    pub fn word_minus_one(w: &Word) -> Self {
        Self::word(w.clone()).sub(&Self::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, BigInt)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    /// Longest word in the support (0 for the zero element).
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FreeRingElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        FreeRingElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect() }
    }

    /// Product, failing when the support would exceed `cap` monomials.
    pub fn try_mul(&self, other: &Self, cap: usize) -> Result<Self> {
        let bound = self.terms.len().saturating_mul(other.terms.len());
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.mul(v), a * b);
            }
            if out.terms.len() > cap {
                return Err(Error::cap("free ring support", out.terms.len(), cap));
            }
        }
        debug_assert!(out.terms.len() <= bound);
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other, usize::MAX).expect("no cap")
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// The ring map to `Z` sending every word to 1.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// The anti-involution `w -> w^-1`.
    pub fn involution(&self) -> Self {
        FreeRingElement { terms: self.terms.iter().map(|(w, c)| (w.inverse(), c.clone())).collect() }
    }

    /// Image in the group ring, indexed by group element.
    pub fn project(&self, pg: &PresentedGroup) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); pg.order()];
        for (w, c) in &self.terms {
            out[pg.evaluate(w)?] += c;
        }
        Ok(out)
    }

    /// Exact division `self = q * d` in the one-generator Laurent ring.
    ///
    /// Returns `None` when some word involves a second generator or the
    /// division leaves a remainder.
    pub fn div_exact_one_generator(&self, d: &Self) -> Option<Self> {
        let to_poly = |e: &Self| -> Option<BTreeMap<i64, BigInt>> {
            e.terms
                .iter()
                .map(|(w, c)| {
                    let sums = w.exponent_sums(1);
                    (w.max_generator().unwrap_or(0) == 0).then(|| (sums[0], c.clone()))
                })
                .collect()
        };
        let mut num = to_poly(self)?;
        let den = to_poly(d)?;
        let (&dlo, _) = den.iter().next()?;
        let (&dhi, lead) = den.iter().next_back()?;
        let qlo = num.keys().next().copied()? - dlo;
        let mut quot: BTreeMap<i64, BigInt> = BTreeMap::new();
        while let Some((&hi, c)) = num.iter().next_back() {
            if hi - dhi < qlo {
                return None;
            }
            if !(c % lead).is_zero() {
                return None;
            }
            let q = c / lead;
            let shift = hi - dhi;
            for (&e, dc) in &den {
                let entry = num.entry(e + shift).or_insert_with(BigInt::zero);
                *entry -= &q * dc;
                if entry.is_zero() {
                    num.remove(&(e + shift));
                }
            }
            quot.insert(shift, q);
        }
        Some(FreeRingElement::from_terms(quot.into_iter().map(|(e, c)| (Word::power_of(0, e), c))))
    }
}

impl fmt::Display for FreeRingElement {
    /// Terms in word order, e.g. `2 - x1 - x1^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = if w.is_empty() { String::new() } else { w.to_string() };
            let mag = c.abs();
            let body = match (w.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => word,
                (false, false) => format!("{mag} {word}"),
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// All reduced words of length at most `max_len`, ordered by length and then
/// by the letter order of [`Letter::all`].
pub fn words_up_to(k: usize, max_len: usize) -> Vec<Word> {
    let letters = Letter::all(k);
    let mut out = vec![Word::identity()];
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.letters().last() == Some(&l.inverse()) {
                    continue;
                }
                next.push(w.mul(&Word::letter(l)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Number of reduced words of length at most `max_len` in rank `k`.
pub fn word_count(k: usize, max_len: usize) -> usize {
    if k == 0 {
        return 1;
    }
    let mut total = 1usize;
    let mut layer = 2 * k;
    for _ in 0..max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * k - 1);
    }
    total
}
