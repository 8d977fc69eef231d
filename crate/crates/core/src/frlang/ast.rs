//! Codes: syntax tree, parser, printer and normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Values of pattern parameters.
pub type Bindings = BTreeMap<String, i64>;

/// An exponent or subscript: a natural number or, in rule patterns, an
/// integer expression in single-letter parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Num(u64),
    Var(String),
    Add(Box<Index>, Box<Index>),
    Sub(Box<Index>, Box<Index>),
    Mul(Box<Index>, Box<Index>),
    /// Exact division; undefined when there is a remainder.
    Div(Box<Index>, Box<Index>),
    Pow(Box<Index>, Box<Index>),
}

impl Index {
    pub fn var(name: &str) -> Self {
        Index::Var(name.to_string())
    }

    pub fn as_num(&self) -> Option<u64> {
        match self {
            Index::Num(n) => Some(*n),
            _ => None,
        }
    }

    pub fn eval(&self, b: &Bindings) -> Option<i64> {
        let bin = |x: &Index, y: &Index| Some((x.eval(b)?, y.eval(b)?));
        match self {
            Index::Num(n) => i64::try_from(*n).ok(),
            Index::Var(v) => b.get(v).copied(),
            Index::Add(x, y) => bin(x, y).and_then(|(x, y)| x.checked_add(y)),
            Index::Sub(x, y) => bin(x, y).and_then(|(x, y)| x.checked_sub(y)),
            Index::Mul(x, y) => bin(x, y).and_then(|(x, y)| x.checked_mul(y)),
            Index::Div(x, y) => {
                let (x, y) = bin(x, y)?;
                (y != 0 && x % y == 0).then(|| x / y)
            }
            Index::Pow(x, y) => {
                let (x, y) = bin(x, y)?;
                x.checked_pow(u32::try_from(y).ok()?)
            }
        }
    }

    /// Evaluates to a natural number.
    pub fn eval_nat(&self, b: &Bindings) -> Option<u64> {
        self.eval(b).and_then(|v| u64::try_from(v).ok())
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Index::Num(_) => {}
            Index::Var(v) => {
                out.insert(v.clone());
            }
            Index::Add(x, y) | Index::Sub(x, y) | Index::Mul(x, y) | Index::Div(x, y) | Index::Pow(x, y) => {
                x.vars(out);
                y.vars(out);
            }
        }
    }

    /// Replaces bound parameters by their values.
    pub fn subst(&self, b: &Bindings) -> Index {
        let mut vs = BTreeSet::new();
        self.vars(&mut vs);
        if vs.iter().all(|v| b.contains_key(v)) {
            if let Some(v) = self.eval_nat(b) {
                return Index::Num(v);
            }
        }
        let bx = |x: &Index| Box::new(x.subst(b));
        match self {
            Index::Num(_) => self.clone(),
            Index::Var(v) => match b.get(v).and_then(|&x| u64::try_from(x).ok()) {
                Some(x) => Index::Num(x),
                None => self.clone(),
            },
            Index::Add(x, y) => Index::Add(bx(x), bx(y)),
            Index::Sub(x, y) => Index::Sub(bx(x), bx(y)),
            Index::Mul(x, y) => Index::Mul(bx(x), bx(y)),
            Index::Div(x, y) => Index::Div(bx(x), bx(y)),
            Index::Pow(x, y) => Index::Pow(bx(x), bx(y)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Index::Add(..) | Index::Sub(..) => 1,
            Index::Mul(..) | Index::Div(..) => 2,
            Index::Pow(..) => 3,
            Index::Num(_) | Index::Var(_) => 4,
        }
    }

    fn is_atomic(&self) -> bool {
        self.precedence() == 4
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Index::Num(n) => write!(f, "{n}")?,
            Index::Var(v) => write!(f, "{v}")?,
            Index::Add(x, y) => {
                x.fmt_prec(f, 1)?;
                write!(f, "+")?;
                y.fmt_prec(f, 2)?;
            }
            Index::Sub(x, y) => {
                x.fmt_prec(f, 1)?;
                write!(f, "-")?;
                y.fmt_prec(f, 2)?;
            }
            Index::Mul(x, y) => {
                x.fmt_prec(f, 2)?;
                write!(f, "*")?;
                y.fmt_prec(f, 3)?;
            }
            Index::Div(x, y) => {
                x.fmt_prec(f, 2)?;
                write!(f, "/")?;
                y.fmt_prec(f, 3)?;
            }
            Index::Pow(x, y) => {
                x.fmt_prec(f, 4)?;
                write!(f, "^")?;
                y.fmt_prec(f, 3)?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }

    /// Form used after `^` and `_`: bare when atomic, parenthesized otherwise.
    fn fmt_attached(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// An fr-code.  `R(m)` is the letter `r_m`; `Hole` only occurs in rule
/// patterns and stands for an arbitrary nonempty product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    F,
    R(Index),
    Hole(String),
    Pow(Box<Code>, Index),
    Prod(Vec<Code>),
    Inter(Vec<Code>),
    Sum(Vec<Code>),
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Code {
    pub fn r(m: u64) -> Self {
        Code::R(Index::Num(m))
    }

    pub fn pow(base: Code, e: u64) -> Self {
        Code::Pow(Box::new(base), Index::Num(e))
    }

    /// Sum with nested sums flattened and operands sorted and deduplicated.
    pub fn sum(parts: Vec<Code>) -> Self {
        Self::set_like(parts, true)
    }

    pub fn inter(parts: Vec<Code>) -> Self {
        Self::set_like(parts, false)
    }

    fn set_like(parts: Vec<Code>, is_sum: bool) -> Self {
        let mut flat = BTreeSet::new();
        for p in parts {
            match (p, is_sum) {
                (Code::Sum(xs), true) | (Code::Inter(xs), false) => flat.extend(xs),
                (p, _) => {
                    flat.insert(p);
                }
            }
        }
        let mut v: Vec<Code> = flat.into_iter().collect();
        if v.len() == 1 {
            return v.pop().unwrap();
        }
        if is_sum {
            Code::Sum(v)
        } else {
            Code::Inter(v)
        }
    }

    /// Product with nested products spliced in.
    pub fn prod(parts: Vec<Code>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Code::Prod(xs) => flat.extend(xs),
                p => flat.push(p),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        Code::Prod(flat)
    }

    /// No parameters and no holes.
    pub fn is_concrete(&self) -> bool {
        match self {
            Code::F => true,
            Code::R(m) => m.as_num().is_some(),
            Code::Hole(_) => false,
            Code::Pow(b, e) => e.as_num().is_some() && b.is_concrete(),
            Code::Prod(xs) | Code::Inter(xs) | Code::Sum(xs) => xs.iter().all(Code::is_concrete),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Code::F | Code::Hole(_) => {}
            Code::R(m) => m.vars(out),
            Code::Pow(b, e) => {
                b.vars(out);
                e.vars(out);
            }
            Code::Prod(xs) | Code::Inter(xs) | Code::Sum(xs) => xs.iter().for_each(|x| x.vars(out)),
        }
    }

    /// Parameters replaced by their values and holes by `hole`, renormalized.
    pub fn subst(&self, b: &Bindings, hole: &Code) -> Code {
        fn go(c: &Code, b: &Bindings, hole: &Code) -> Code {
            match c {
                Code::F => Code::F,
                Code::R(m) => Code::R(m.subst(b)),
                Code::Hole(_) => hole.clone(),
                Code::Pow(x, e) => Code::Pow(Box::new(go(x, b, hole)), e.subst(b)),
                Code::Prod(xs) => Code::Prod(xs.iter().map(|x| go(x, b, hole)).collect()),
                Code::Inter(xs) => Code::Inter(xs.iter().map(|x| go(x, b, hole)).collect()),
                Code::Sum(xs) => Code::Sum(xs.iter().map(|x| go(x, b, hole)).collect()),
            }
        }
        normalize(&go(self, b, hole))
    }

    /// Letters `r_m` occurring in a concrete code.
    pub fn letters(&self, out: &mut BTreeSet<u64>) {
        match self {
            Code::F | Code::Hole(_) => {}
            Code::R(m) => {
                if let Some(m) = m.as_num() {
                    out.insert(m);
                }
            }
            Code::Pow(b, _) => b.letters(out),
            Code::Prod(xs) | Code::Inter(xs) | Code::Sum(xs) => xs.iter().for_each(|x| x.letters(out)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Code::Sum(_) => 1,
            Code::Inter(_) => 2,
            Code::Prod(_) => 3,
            Code::Pow(..) => 4,
            Code::F | Code::R(_) | Code::Hole(_) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            Code::F => write!(f, "f")?,
            Code::R(m) => match m.as_num() {
                Some(1) => write!(f, "r")?,
                _ => {
                    write!(f, "r_")?;
                    m.fmt_attached(f)?;
                }
            },
            Code::Hole(h) => write!(f, "{h}")?,
            Code::Pow(b, e) => {
                b.fmt_prec(f, 5)?;
                write!(f, "^")?;
                e.fmt_attached(f)?;
            }
            Code::Prod(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    // A nested product keeps its parentheses so the printed
                    // form reparses to the same tree.
                    x.fmt_prec(f, 4)?;
                }
            }
            Code::Inter(xs) | Code::Sum(xs) => {
                let sep = if matches!(self, Code::Sum(_)) { " + " } else { " ∩ " };
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    x.fmt_prec(f, p + 1)?;
                }
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Flattens sums, intersections and products, expands powers of products,
/// and merges adjacent equal factors into powers.
pub fn normalize(code: &Code) -> Code {
    match code {
        Code::F | Code::R(_) | Code::Hole(_) => code.clone(),
        Code::Pow(b, e) => {
            let b = normalize(b);
            match (b, e.as_num()) {
                (b, Some(1)) => b,
                (Code::Pow(bb, e2), Some(k)) if e2.as_num().is_some() => {
                    Code::Pow(bb, Index::Num(e2.as_num().unwrap() * k))
                }
                (Code::Prod(xs), Some(k)) => {
                    let rep: Vec<Code> = (0..k).flat_map(|_| xs.iter().cloned()).collect();
                    normalize(&Code::Prod(rep))
                }
                (b, _) => Code::Pow(Box::new(b), e.clone()),
            }
        }
        Code::Prod(xs) => {
            let flat = match Code::prod(xs.iter().map(normalize).collect()) {
                Code::Prod(v) => v,
                single => return single,
            };
            let mut merged: Vec<(Code, Index)> = Vec::new();
            for x in flat {
                let (base, e) = match x {
                    Code::Pow(b, e) => (*b, e),
                    other => (other, Index::Num(1)),
                };
                if let Some((lb, le)) = merged.last_mut() {
                    if *lb == base {
                        if let (Some(a), Some(b)) = (le.as_num(), e.as_num()) {
                            *le = Index::Num(a + b);
                            continue;
                        }
                    }
                }
                merged.push((base, e));
            }
            let parts: Vec<Code> = merged
                .into_iter()
                .map(|(b, e)| if e == Index::Num(1) { b } else { Code::Pow(Box::new(b), e) })
                .collect();
            Code::prod(parts)
        }
        Code::Sum(xs) => Code::sum(xs.iter().map(normalize).collect()),
        Code::Inter(xs) => Code::inter(xs.iter().map(normalize).collect()),
    }
}

/// Parses a concrete code and returns its normal form.
pub fn parse(text: &str) -> Result<Code> {
    let code = Parser::new(text, false).parse_code()?;
    Ok(normalize(&code))
}

/// Parses a rule pattern: exponents and subscripts may be parameter
/// expressions and the letters `a`, `b`, `c` are holes.
pub fn parse_pattern(text: &str) -> Result<Code> {
    let code = Parser::new(text, true).parse_code()?;
    Ok(normalize(&code))
}

/// Parses a standalone index expression such as `t*(p+2)-1`.
pub fn parse_index(text: &str) -> Result<Index> {
    let mut p = Parser::new(text, true);
    let e = p.index_expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("trailing input after index"));
    }
    Ok(e)
}

pub(crate) const PARAMETERS: &[char] = &['n', 'k', 'm', 'p', 't', 'j', 'i'];
const HOLES: &[char] = &['a', 'b', 'c'];

pub(crate) struct Parser {
    pub(crate) chars: Vec<char>,
    pub(crate) pos: usize,
    pattern: bool,
}

impl Parser {
    pub(crate) fn new(text: &str, pattern: bool) -> Self {
        Parser { chars: text.chars().collect(), pos: 0, pattern }
    }

    pub(crate) fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    pub(crate) fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let k: Vec<char> = kw.chars().collect();
        if self.chars[self.pos..].starts_with(&k) {
            self.pos += k.len();
            true
        } else {
            false
        }
    }

    fn parse_code(&mut self) -> Result<Code> {
        if self.peek().is_none() {
            return Err(self.err("empty code"));
        }
        let c = self.sum()?;
        if self.peek().is_some() {
            return Err(self.err(format!("unexpected {:?}", self.chars[self.pos])));
        }
        Ok(c)
    }

    fn sum(&mut self) -> Result<Code> {
        let mut parts = vec![self.inter()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            parts.push(self.inter()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Code::sum(parts) })
    }

    fn inter(&mut self) -> Result<Code> {
        let mut parts = vec![self.prod()?];
        while matches!(self.peek(), Some('∩') | Some('&')) {
            self.pos += 1;
            parts.push(self.prod()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Code::inter(parts) })
    }

    fn starts_factor(&mut self) -> bool {
        match self.peek() {
            Some('f' | 's' | 'r' | '(') => true,
            Some(c) => self.pattern && HOLES.contains(&c),
            None => false,
        }
    }

    fn prod(&mut self) -> Result<Code> {
        if !self.starts_factor() {
            return Err(self.err("expected a letter or '('"));
        }
        let mut parts = Vec::new();
        while self.starts_factor() {
            parts.push(self.factor()?);
        }
        Ok(Code::prod(parts))
    }

    fn factor(&mut self) -> Result<Code> {
        let atom = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.attached_index("exponent")?;
            return Ok(Code::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Code> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match c {
            'f' => Ok(Code::F),
            's' => Ok(Code::r(2)),
            'r' => {
                let explicit = self.chars.get(self.pos) == Some(&'_');
                if explicit {
                    self.pos += 1;
                }
                let next = self.chars.get(self.pos).copied();
                let subscripted = explicit || next.is_some_and(|d| d.is_ascii_digit());
                if !subscripted {
                    return Ok(Code::r(1));
                }
                Ok(Code::R(self.attached_index("subscript")?))
            }
            '(' => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            h if self.pattern && HOLES.contains(&h) => Ok(Code::Hole(h.to_string())),
            other => {
                self.pos -= 1;
                Err(self.err(format!("unexpected {other:?}")))
            }
        }
    }

    /// A natural number, or in patterns a parameter or a parenthesized
    /// expression.  Zero is rejected.
    pub(crate) fn attached_index(&mut self, what: &str) -> Result<Index> {
        self.skip_ws();
        let start = self.pos;
        let e = match self.chars.get(self.pos).copied() {
            Some(d) if d.is_ascii_digit() => Index::Num(self.nat()?),
            Some('(') => {
                self.pos += 1;
                let e = self.index_expr()?;
                self.expect(')')?;
                e
            }
            Some(v) if PARAMETERS.contains(&v) => {
                self.pos += 1;
                Index::Var(v.to_string())
            }
            _ => return Err(self.err(format!("expected {what}"))),
        };
        let mut vs = BTreeSet::new();
        e.vars(&mut vs);
        if !vs.is_empty() && !self.pattern {
            self.pos = start;
            return Err(self.err(format!("symbolic {what} outside a rule pattern")));
        }
        let e = if vs.is_empty() {
            match e.eval_nat(&Bindings::new()) {
                Some(v) => Index::Num(v),
                None => {
                    self.pos = start;
                    return Err(self.err(format!("{what} is not a natural number")));
                }
            }
        } else {
            e
        };
        if e == Index::Num(0) {
            self.pos = start;
            return Err(self.err(format!("{what} must be at least 1")));
        }
        Ok(e)
    }

    pub(crate) fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse { pos: start, msg: "expected a natural number".into() })
    }

    pub(crate) fn index_expr(&mut self) -> Result<Index> {
        let mut lhs = self.index_term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = Index::Add(Box::new(lhs), Box::new(self.index_term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = Index::Sub(Box::new(lhs), Box::new(self.index_term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn index_term(&mut self) -> Result<Index> {
        let mut lhs = self.index_power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    lhs = Index::Mul(Box::new(lhs), Box::new(self.index_power()?));
                }
                Some('/') => {
                    self.pos += 1;
                    lhs = Index::Div(Box::new(lhs), Box::new(self.index_power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn index_power(&mut self) -> Result<Index> {
        let base = self.index_atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.index_power()?;
            return Ok(Index::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn index_atom(&mut self) -> Result<Index> {
        match self.peek() {
            Some(d) if d.is_ascii_digit() => Ok(Index::Num(self.nat()?)),
            Some('(') => {
                self.pos += 1;
                let e = self.index_expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(v) if PARAMETERS.contains(&v) => {
                self.pos += 1;
                Ok(Index::Var(v.to_string()))
            }
            _ => Err(self.err("expected an index expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_examples() {
        let c = parse("r^2 f + f r^2").unwrap();
        let a = Code::prod(vec![Code::pow(Code::r(1), 2), Code::F]);
        let b = Code::prod(vec![Code::F, Code::pow(Code::r(1), 2)]);
        assert_eq!(c, Code::sum(vec![a, b]));
        let c = parse("r_4 f + f r_4").unwrap();
        assert_eq!(c, Code::sum(vec![Code::prod(vec![Code::r(4), Code::F]), Code::prod(vec![Code::F, Code::r(4)])]));
        let c = parse("f r ∩ r f").unwrap();
        assert_eq!(c, parse("r f & f r").unwrap());
        assert!(matches!(c, Code::Inter(_)));
    }

    #[test]
    fn precedence() {
        // power > product > ∩ > +
        let c = parse("f r^2 ∩ r f + s").unwrap();
        match &c {
            Code::Sum(xs) => assert!(xs.iter().any(|x| matches!(x, Code::Inter(_)))),
            _ => panic!("{c:?}"),
        }
        assert_eq!(parse("s").unwrap(), Code::r(2));
        assert_eq!(parse("r2").unwrap(), Code::r(2));
        assert_eq!(parse("rf").unwrap(), Code::prod(vec![Code::r(1), Code::F]));
    }

    #[test]
    fn normal_form() {
        assert_eq!(parse("f f").unwrap(), Code::pow(Code::F, 2));
        assert_eq!(parse("f^2 f").unwrap(), Code::pow(Code::F, 3));
        assert_eq!(parse("(f r)^2").unwrap(), parse("f r f r").unwrap());
        assert_eq!(parse("r + r").unwrap(), Code::r(1));
        assert_eq!(parse("(r^2)^3").unwrap(), Code::pow(Code::r(1), 6));
        assert_eq!(parse("r^1").unwrap(), Code::r(1));
        let c = parse("(ff + r)^2").unwrap();
        assert!(matches!(c, Code::Pow(..)));
    }

    #[test]
    fn printing_round_trips() {
        for t in ["r^2 f + f r^2", "r_4 f + f r_4", "f r ∩ r f", "(ff+r)^2", "fff + rr", "(f + r) s (f ∩ r_3)", "r_12^3 f"] {
            let c = parse(t).unwrap();
            let printed = c.to_string();
            assert_eq!(parse(&printed).unwrap(), c, "{t} -> {printed}");
            assert_eq!(parse(&printed).unwrap().to_string(), printed);
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse("r_0 f") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("f +"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
        assert!(matches!(parse("f ^ 0"), Err(Error::Parse { .. })));
        assert!(matches!(parse("r^n f"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(f r"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn patterns() {
        let p = parse_pattern("s^((t*p+1)/2) f + f s^((t*p-1)/2) f").unwrap();
        assert!(!p.is_concrete());
        assert_eq!(parse_pattern(&p.to_string()).unwrap(), p);
        let p = parse_pattern("a r_m b").unwrap();
        assert_eq!(p.to_string(), "a r_m b");
        let e = parse_index("t*(p+2)-1").unwrap();
        let b: Bindings = [("t".to_string(), 2), ("p".to_string(), 3)].into();
        assert_eq!(e.eval(&b), Some(9));
        assert_eq!(parse_index("(p^2+1)/2").unwrap().eval(&[("p".to_string(), 4)].into()), None);
        assert_eq!(e.subst(&b), Index::Num(9));
    }
}
