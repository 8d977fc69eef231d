use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator `x_{gen+1}` or its inverse, stored as `±(gen + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        let v = gen as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn gen(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn exponent(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// The letters `x1, x1^-1, x2, x2^-1, ...` in tie-breaking order.
    pub fn all(k: usize) -> Vec<Letter> {
        (0..k).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }
}

/// A freely reduced word in the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(gen: usize) -> Self {
        Word(vec![Letter::new(gen, false)])
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Reduces the given letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// `x_gen^e`.
    pub fn power_of(gen: usize, e: i64) -> Self {
        let l = Letter::new(gen, e < 0);
        Word(vec![l; e.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen()).max()
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, k: usize) -> Vec<i64> {
        let mut v = vec![0; k];
        for l in &self.0 {
            v[l.gen()] += l.exponent();
        }
        v
    }

    pub fn parse(text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            let pos = text[offset..].find(tok).map_or(offset, |p| p + offset);
            offset = pos + tok.len();
            let err = |msg: &str| Error::Parse { pos, msg: format!("{msg} in {tok:?}") };
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                None => (tok, 1),
            };
            let idx = base
                .strip_prefix('x')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| err("expected a letter xi with i >= 1"))?;
            let l = Letter::new(idx - 1, exp < 0);
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word::from_letters(letters))
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    /// Runs of equal letters are printed with exponents, e.g. `x1^2 x2^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.exponent();
            parts.push(if e == 1 { format!("x{}", l.gen() + 1) } else { format!("x{}^{}", l.gen() + 1, e) });
            i = j;
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        let w = Word::parse("x1 x2 x2^-1 x1^2").unwrap();
        assert_eq!(w, Word::power_of(0, 3));
        assert_eq!(w.to_string(), "x1^3");
        assert!(Word::parse("x1 x1^-1").unwrap().is_empty());
        assert!(Word::parse("y1").is_err());
        assert!(Word::parse("x0").is_err());
    }

    #[test]
    fn display_roundtrip() {
        let w = Word::parse("x1 x2 x1^-1 x2^-1").unwrap();
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
        assert_eq!(Word::commutator(&Word::generator(0), &Word::generator(1)), w);
    }
}
