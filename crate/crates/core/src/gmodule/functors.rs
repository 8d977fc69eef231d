//! Functor powers of integer matrices on their standard bases.
//!
//! Every function here maps a matrix `A: Z^r -> Z^m` to the induced map on
//! `T^n`, `S^n` or `Ex^n`. Bases are ordered lexicographically on index
//! tuples: all tuples for `T^n`, nondecreasing ones for `S^n`, increasing ones
//! for `Ex^n`.

use std::collections::HashMap;

use crate::linalg::Matrix;

pub fn tuples(r: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..r).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Nondecreasing index tuples of length `n` over `0..r`.
pub fn multisets(r: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(r, n, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Increasing index tuples of length `n` over `0..r`.
pub fn subsets(r: usize, n: usize) -> Vec<Vec<usize>> {
    multisets(r, n).into_iter().filter(|t| t.windows(2).all(|w| w[0] < w[1])).collect()
}

pub fn tuple_index(r: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &i| acc * r + i)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Witt number `(1/n) Σ_{d|n} μ(d) r^(n/d)`.
pub fn witt_number(r: usize, n: usize) -> usize {
    fn mobius(mut d: usize) -> i64 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= d {
            if d % p == 0 {
                d /= p;
                if d % p == 0 {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if d > 1 {
            result = -result;
        }
        result
    }
    if n == 0 {
        return 1;
    }
    let total: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (r as i64).pow((n / d) as u32)).sum();
    (total / n as i64) as usize
}

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

pub fn tensor_matrix(a: &Matrix<i64>, n: usize) -> Matrix<i64> {
    (0..n).fold(Matrix::identity(1), |acc, _| acc.try_kronecker(a).expect("overflow in tensor power"))
}

/// Induced map `S^n(A)`.
pub fn sym_matrix(a: &Matrix<i64>, n: usize) -> Matrix<i64> {
    let (m, r) = (a.rows(), a.cols());
    let rows = multisets(m, n);
    let index: HashMap<&Vec<usize>, usize> = rows.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let cols = multisets(r, n);
    let mut out = Matrix::zeros(rows.len(), cols.len());
    for (j, mono) in cols.iter().enumerate() {
        let mut poly: HashMap<Vec<usize>, i64> = HashMap::from([(Vec::new(), 1)]);
        for &i in mono {
            let mut next: HashMap<Vec<usize>, i64> = HashMap::new();
            for (t, c) in &poly {
                for b in 0..m {
                    let v = a[(b, i)];
                    if v == 0 {
                        continue;
                    }
                    let mut t2 = t.clone();
                    let pos = t2.partition_point(|&x| x <= b);
                    t2.insert(pos, b);
                    *next.entry(t2).or_insert(0) += c * v;
                }
            }
            poly = next;
        }
        for (t, c) in poly {
            if c != 0 {
                out[(index[&t], j)] = c;
            }
        }
    }
    out
}

fn small_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..n)
            .map(|j| {
                if m[0][j] == 0 {
                    return 0;
                }
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * small_det(&minor)
            })
            .sum(),
    }
}

/// Induced map `Ex^n(A)`: the entry at `(J, I)` is the minor `det A[J, I]`.
pub fn ext_matrix(a: &Matrix<i64>, n: usize) -> Matrix<i64> {
    let rows = subsets(a.rows(), n);
    let cols = subsets(a.cols(), n);
    let mut out = Matrix::zeros(rows.len(), cols.len());
    for (j, ci) in cols.iter().enumerate() {
        for (i, rj) in rows.iter().enumerate() {
            let sub: Vec<Vec<i64>> = rj.iter().map(|&r| ci.iter().map(|&c| a[(r, c)]).collect()).collect();
            out[(i, j)] = small_det(&sub);
        }
    }
    out
}

/// Sign of the permutation sorting `t` (0 when `t` has a repeat).
pub fn sort_sign(t: &[usize]) -> (i64, Vec<usize>) {
    let mut v = t.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                sign = 0;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        sign = 0;
    }
    (sign, v)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == n {
            let (s, _) = sort_sign(cur);
            out.push((cur.clone(), s));
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, n, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut Vec::new(), &mut vec![false; n], n, &mut out);
    out
}

/// Symmetrization `S^n -> T^n` and multiplication `T^n -> S^n`.
pub fn sym_inclusion_projection(r: usize, n: usize) -> (Matrix<i64>, Matrix<i64>) {
    let sym = multisets(r, n);
    let index: HashMap<&Vec<usize>, usize> = sym.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let tdim = r.pow(n as u32);
    let mut inc = Matrix::zeros(tdim, sym.len());
    for (j, m) in sym.iter().enumerate() {
        for (p, _) in permutations(n) {
            let t: Vec<usize> = p.iter().map(|&k| m[k]).collect();
            inc[(tuple_index(r, &t), j)] += 1;
        }
    }
    let mut proj = Matrix::zeros(sym.len(), tdim);
    for t in tuples(r, n) {
        let mut s = t.clone();
        s.sort_unstable();
        proj[(index[&s], tuple_index(r, &t))] = 1;
    }
    (inc, proj)
}

/// Antisymmetrization `Ex^n -> T^n` and the wedge projection `T^n -> Ex^n`.
pub fn ext_inclusion_projection(r: usize, n: usize) -> (Matrix<i64>, Matrix<i64>) {
    let ext = subsets(r, n);
    let index: HashMap<&Vec<usize>, usize> = ext.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let tdim = r.pow(n as u32);
    let mut inc = Matrix::zeros(tdim, ext.len());
    for (j, m) in ext.iter().enumerate() {
        for (p, s) in permutations(n) {
            let t: Vec<usize> = p.iter().map(|&k| m[k]).collect();
            inc[(tuple_index(r, &t), j)] += s;
        }
    }
    let mut proj = Matrix::zeros(ext.len(), tdim);
    for t in tuples(r, n) {
        let (s, sorted) = sort_sign(&t);
        if s != 0 {
            proj[(index[&sorted], tuple_index(r, &t))] = s;
        }
    }
    (inc, proj)
}

/// Matrix of the right action of a permutation `σ` of tensor positions:
/// `(v·σ)_i = v_{σ(i)}`.
pub fn position_permutation(r: usize, n: usize, sigma: &[usize]) -> Matrix<i64> {
    let dim = r.pow(n as u32);
    let mut out = Matrix::zeros(dim, dim);
    for t in tuples(r, n) {
        let s: Vec<usize> = (0..n).map(|i| t[sigma[i]]).collect();
        out[(tuple_index(r, &s), tuple_index(r, &t))] = 1;
    }
    out
}

/// Right multiplication by `x = (1 - (2,1))(1 - (3,2,1))…(1 - (n,…,1))` on `T^n`.
///
/// Factors act left to right, so a basis tensor `a_1 ⊗ … ⊗ a_n` is sent to
/// the left-normed bracket `[[…[a_1, a_2], …], a_n]`.
pub fn lie_element_matrix(r: usize, n: usize) -> Matrix<i64> {
    let all = tuples(r, n);
    let dim = all.len();
    let mut out = Matrix::zeros(dim, dim);
    for (j, t) in all.iter().enumerate() {
        let mut v: HashMap<Vec<usize>, i64> = HashMap::from([(t.clone(), 1)]);
        for k in 1..n {
            // cycle (k+1, k, …, 1): σ(i) = i - 1 for 1 <= i-1 < k+1, σ(0) = k (0-based).
            let sigma: Vec<usize> = (0..n).map(|i| if i == 0 { k } else if i <= k { i - 1 } else { i }).collect();
            let mut next = v.clone();
            for (u, c) in &v {
                let s: Vec<usize> = (0..n).map(|i| u[sigma[i]]).collect();
                *next.entry(s).or_insert(0) -= c;
            }
            next.retain(|_, c| *c != 0);
            v = next;
        }
        for (u, c) in v {
            out[(tuple_index(r, &u), j)] = c;
        }
        debug_assert_eq!(j, tuple_index(r, t));
    }
    out
}
