//! Linear maps on `Z[F]` whose kernels are given ideals, evaluated word by word.
//!
//! `f = ker ε`, `r = ker(Z[F] -> ZG)`, `r_2 = ker(Z[F] -> Z[F/γ_2(R)])`,
//! `f^n = ker` of the degree `< n` Magnus expansion, `K f = {a ∈ f : ∂_i a ∈ K}`
//! and `f K = ι(ι(K) f)` for the anti-involution `ι`.

use std::collections::HashMap;

use crate::frlang::Code;
use crate::group::{Letter, PresentedGroup, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestMap {
    Aug,
    Group,
    /// Magnus coefficients of degree below `n`.
    Magnus(usize),
    Metabelian,
    /// `K f` from the map of `K`.
    LeftF(Box<TestMap>),
    /// `f K` from the map of `ι(K)`.
    RightF(Box<TestMap>),
    Stack(Vec<TestMap>),
}

/// `ι` on codes: products reversed, letters fixed.
pub fn involute(code: &Code) -> Code {
    match code {
        Code::F | Code::R(_) | Code::Hole(_) => code.clone(),
        Code::Pow(b, e) => Code::Pow(Box::new(involute(b)), e.clone()),
        Code::Prod(xs) => Code::prod(xs.iter().rev().map(involute).collect()),
        Code::Sum(xs) => Code::sum(xs.iter().map(involute).collect()),
        Code::Inter(xs) => Code::inter(xs.iter().map(involute).collect()),
    }
}

fn factors(code: &Code) -> Vec<Code> {
    let mut out = Vec::new();
    let parts = match code {
        Code::Prod(xs) => xs.clone(),
        other => vec![other.clone()],
    };
    for p in parts {
        match p {
            Code::Pow(b, e) if e.as_num().is_some() && !matches!(*b, Code::Prod(_)) => {
                for _ in 0..e.as_num().unwrap() {
                    out.push((*b).clone());
                }
            }
            other => out.push(other),
        }
    }
    out
}

/// The test map of a code, when its ideal is such a kernel.
pub fn describe(code: &Code) -> Option<TestMap> {
    match code {
        Code::F => Some(TestMap::Aug),
        Code::R(m) => match m.as_num()? {
            1 => Some(TestMap::Group),
            2 => Some(TestMap::Metabelian),
            _ => None,
        },
        Code::Hole(_) | Code::Sum(_) => None,
        Code::Inter(xs) => xs.iter().map(describe).collect::<Option<Vec<_>>>().map(TestMap::Stack),
        Code::Pow(..) | Code::Prod(_) => {
            let fs = factors(code);
            if fs.len() == 1 {
                return match &fs[0] {
                    Code::Pow(..) => None,
                    single => describe(single),
                };
            }
            if fs.iter().all(|x| *x == Code::F) {
                return Some(TestMap::Magnus(fs.len()));
            }
            if fs.last() == Some(&Code::F) {
                let init = Code::prod(fs[..fs.len() - 1].to_vec());
                return describe(&init).map(|m| TestMap::LeftF(Box::new(m)));
            }
            if fs[0] == Code::F {
                let tail = Code::prod(fs[1..].to_vec());
                return describe(&involute(&tail)).map(|m| TestMap::RightF(Box::new(m)));
            }
            None
        }
    }
}

/// Group data shared by all maps of one presentation.
pub struct WordContext<'a> {
    pub pg: &'a PresentedGroup,
    k: usize,
    /// Index of the Schreier generator `s(e, x_i)`, by `e * k + i`.
    schreier: Vec<Option<usize>>,
}

impl<'a> WordContext<'a> {
    pub fn new(pg: &'a PresentedGroup) -> Self {
        let k = pg.generator_count();
        let g = pg.group();
        let data = pg.schreier();
        let mut schreier = vec![None; pg.order() * k];
        let mut next = 0;
        for (e, t) in data.transversal.iter().enumerate() {
            for i in 0..k {
                let target = g.mul(e, pg.image(i));
                let s = t.mul(&Word::generator(i)).mul(&data.transversal[target].inverse());
                if !s.is_empty() {
                    schreier[e * k + i] = Some(next);
                    next += 1;
                }
            }
        }
        WordContext { pg, k, schreier }
    }

    pub(crate) fn element_of(&self, w: &[Letter]) -> usize {
        let g = self.pg.group();
        w.iter().fold(g.identity(), |acc, &l| g.mul(acc, self.pg.letter_image(l)))
    }

    /// `(π(w), ρ_ab)` with `w = ρ t_{π(w)}`.
    pub(crate) fn metabelian_key(&self, w: &[Letter]) -> Vec<i64> {
        let g = self.pg.group();
        let mut e = g.identity();
        let mut rho: Vec<i64> = Vec::new();
        let bump = |idx: Option<usize>, d: i64, rho: &mut Vec<i64>| {
            if let Some(j) = idx {
                if rho.len() <= j {
                    rho.resize(j + 1, 0);
                }
                rho[j] += d;
            }
        };
        for &l in w {
            let i = l.gen();
            if l.is_inverse() {
                let prev = g.mul(e, self.pg.letter_image(l));
                bump(self.schreier[prev * self.k + i], -1, &mut rho);
                e = prev;
            } else {
                bump(self.schreier[e * self.k + i], 1, &mut rho);
                e = g.mul(e, self.pg.image(i));
            }
        }
        while rho.last() == Some(&0) {
            rho.pop();
        }
        let mut key = vec![e as i64];
        key.extend(rho);
        key
    }

    fn magnus(&self, w: &[Letter], n: usize) -> Vec<(usize, i64)> {
        // Dense truncated series indexed by monomials of degree < n.
        let k = self.k;
        let mut offsets = vec![0usize];
        for d in 0..n {
            offsets.push(offsets[d] + k.pow(d as u32));
        }
        let dim = offsets[n];
        let degree_of = |idx: usize| (0..n).rfind(|&d| offsets[d] <= idx).unwrap();
        let mut series = vec![0i64; dim];
        series[0] = 1;
        for &l in w {
            let i = l.gen();
            let sign: i64 = if l.is_inverse() { -1 } else { 1 };
            let mut next = series.clone();
            for idx in 0..dim {
                let c = series[idx];
                if c == 0 {
                    continue;
                }
                let d = degree_of(idx);
                let local = idx - offsets[d];
                // Multiply by X_i^e for e >= 1; coefficient sign^e for x^-1, 1 for e = 1 for x.
                let mut mono = local;
                for e in 1..n - d {
                    mono = mono * k + i;
                    let coef = if l.is_inverse() { sign.pow(e as u32) } else if e == 1 { 1 } else { break };
                    next[offsets[d + e] + mono] += c * coef;
                }
            }
            series = next;
        }
        series.into_iter().enumerate().filter(|(_, c)| *c != 0).collect()
    }
}

/// A test map together with the numbering of its target coordinates.
pub struct MapEvaluator {
    pub map: TestMap,
    coords: HashMap<Vec<i64>, usize>,
}

impl MapEvaluator {
    pub fn new(map: TestMap) -> Self {
        MapEvaluator { map, coords: HashMap::new() }
    }

    /// Coordinates seen so far.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn eval_word(&mut self, ctx: &WordContext, w: &[Letter]) -> Vec<(usize, i64)> {
        let mut raw = Vec::new();
        let map = self.map.clone();
        eval(&map, ctx, w, &mut Vec::new(), 1, &mut raw);
        self.collect(raw)
    }

    pub fn eval_element(&mut self, ctx: &WordContext, a: &super::FreeRingElement) -> Vec<(usize, i64)> {
        let mut raw = Vec::new();
        let map = self.map.clone();
        for (w, c) in a.terms() {
            let c = i64::try_from(c).expect("coefficient fits in i64");
            eval(&map, ctx, w.letters(), &mut Vec::new(), c, &mut raw);
        }
        self.collect(raw)
    }

    fn collect(&mut self, raw: Vec<(Vec<i64>, i64)>) -> Vec<(usize, i64)> {
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (key, c) in raw {
            let n = self.coords.len();
            let idx = *self.coords.entry(key).or_insert(n);
            *acc.entry(idx).or_insert(0) += c;
        }
        let mut out: Vec<(usize, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        out.sort_unstable();
        out
    }
}

fn with(path: &mut Vec<i64>, extra: &[i64]) -> Vec<i64> {
    let mut k = path.clone();
    k.extend_from_slice(extra);
    k
}

fn eval(map: &TestMap, ctx: &WordContext, w: &[Letter], path: &mut Vec<i64>, c: i64, out: &mut Vec<(Vec<i64>, i64)>) {
    match map {
        TestMap::Aug => out.push((with(path, &[0]), c)),
        TestMap::Group => out.push((with(path, &[1, ctx.element_of(w) as i64]), c)),
        TestMap::Magnus(n) => {
            for (idx, v) in ctx.magnus(w, *n) {
                out.push((with(path, &[2, idx as i64]), c * v));
            }
        }
        TestMap::Metabelian => {
            let mut key = with(path, &[3]);
            key.extend(ctx.metabelian_key(w));
            out.push((key, c));
        }
        TestMap::LeftF(inner) => {
            out.push((with(path, &[0]), c));
            // ∂_i w = Σ over occurrences: + prefix before x_i, - prefix through x_i^-1.
            for (j, l) in w.iter().enumerate() {
                path.extend_from_slice(&[10, l.gen() as i64]);
                if l.is_inverse() {
                    eval(inner, ctx, &w[..=j], path, -c, out);
                } else {
                    eval(inner, ctx, &w[..j], path, c, out);
                }
                path.truncate(path.len() - 2);
            }
        }
        TestMap::RightF(inner) => {
            let inv: Vec<Letter> = w.iter().rev().map(|l| l.inverse()).collect();
            let left = TestMap::LeftF(inner.clone());
            eval(&left, ctx, &inv, path, c, out);
        }
        TestMap::Stack(ms) => {
            for (j, m) in ms.iter().enumerate() {
                path.extend_from_slice(&[20, j as i64]);
                eval(m, ctx, w, path, c, out);
                path.truncate(path.len() - 2);
            }
        }
    }
}
