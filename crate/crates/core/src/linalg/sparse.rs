//! Sparse elimination of unit pivots ahead of a dense Smith form.
//!
//! Boundary matrices of bar complexes are huge but have entries `0, ±1` and
//! very few nonzeros per column. Eliminating unit pivots with a Markowitz
//! cost bound shrinks them to a small dense core without changing the
//! nontrivial invariant factors.

use num_bigint::BigInt;

use super::matrix::Matrix;
use crate::scalar::{Overflow, Scalar};

/// Columns are sorted lists of `(row, value)` with nonzero values.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize) -> Self {
        SparseMatrix { rows, cols: Vec::new() }
    }

    /// Adds a column given by unsorted entries that may repeat rows.
    pub fn push_column(&mut self, mut entries: Vec<(usize, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut col: Vec<(usize, i64)> = Vec::with_capacity(entries.len());
        for (r, v) in entries {
            debug_assert!(r < self.rows);
            match col.last_mut() {
                Some(last) if last.0 == r => last.1 += v,
                _ => col.push((r, v)),
            }
        }
        col.retain(|e| e.1 != 0);
        self.cols.push(col);
    }

    pub fn from_dense<T: Scalar>(m: &Matrix<T>) -> Option<Self> {
        let mut s = SparseMatrix::new(m.rows());
        for j in 0..m.cols() {
            let mut col = Vec::new();
            for i in 0..m.rows() {
                let v = &m[(i, j)];
                if !v.is_zero() {
                    col.push((i, i64::from_bigint(&v.to_bigint())?));
                }
            }
            s.cols.push(col);
        }
        Some(s)
    }

    pub fn to_dense(&self) -> Matrix<BigInt> {
        let mut m = Matrix::zeros(self.rows, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }
}

/// Outcome of unit elimination: the original matrix is equivalent to
/// `I_units ⊕ core ⊕ 0`, with `empty_rows` additional zero rows.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub units: usize,
    pub core: Matrix<BigInt>,
    pub empty_rows: usize,
}

fn combine(target: &[(usize, i64)], q: i64, src: &[(usize, i64)]) -> Result<Vec<(usize, i64)>, Overflow> {
    // target - q * src
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < src.len() {
        let ra = target.get(a).map_or(usize::MAX, |e| e.0);
        let rb = src.get(b).map_or(usize::MAX, |e| e.0);
        if ra < rb {
            out.push(target[a]);
            a += 1;
        } else if rb < ra {
            let v = src[b].1.checked_mul(q).and_then(i64::checked_neg).ok_or(Overflow)?;
            out.push((rb, v));
            b += 1;
        } else {
            let v = target[a].1.checked_sub(src[b].1.checked_mul(q).ok_or(Overflow)?).ok_or(Overflow)?;
            if v != 0 {
                out.push((ra, v));
            }
            a += 1;
            b += 1;
        }
    }
    Ok(out)
}

/// Eliminates unit pivots; fails with [`Overflow`] only if an `i64` entry overflows.
pub fn eliminate_units(m: &SparseMatrix) -> Result<Reduced, Overflow> {
    let mut cols: Vec<Option<Vec<(usize, i64)>>> =
        m.cols.iter().map(|c| (!c.is_empty()).then(|| c.clone())).collect();
    let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); m.rows];
    let mut row_count = vec![0usize; m.rows];
    for (j, c) in cols.iter().enumerate() {
        for &(i, _) in c.iter().flatten() {
            row_cols[i].push(j);
            row_count[i] += 1;
        }
    }
    let mut row_alive = vec![true; m.rows];
    let mut units = 0usize;
    let mut threshold = 0usize;
    loop {
        let mut order: Vec<usize> = (0..cols.len()).filter(|&j| cols[j].is_some()).collect();
        order.sort_by_key(|&j| cols[j].as_ref().map_or(0, Vec::len));
        let mut pivoted = 0usize;
        let mut any_unit = false;
        for &c in &order {
            let Some(col) = cols[c].as_ref() else { continue };
            let clen = col.len();
            let mut best: Option<(usize, usize, i64)> = None;
            for &(r, v) in col {
                if v.abs() != 1 || !row_alive[r] {
                    continue;
                }
                let cost = (clen - 1) * (row_count[r] - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, r, v));
                }
            }
            let Some((cost, r, pv)) = best else { continue };
            any_unit = true;
            if cost > threshold {
                continue;
            }
            let pivot_col = cols[c].take().unwrap();
            let mut others = std::mem::take(&mut row_cols[r]);
            others.sort_unstable();
            others.dedup();
            for &c2 in &others {
                if c2 == c {
                    continue;
                }
                let Some(target) = cols[c2].as_ref() else { continue };
                let Ok(pos) = target.binary_search_by_key(&r, |e| e.0) else { continue };
                let q = target[pos].1 * pv;
                let new = combine(target, q, &pivot_col)?;
                let old = cols[c2].take().unwrap();
                // Row bookkeeping: rows that appear or vanish.
                let (mut a, mut b) = (0, 0);
                while a < old.len() || b < new.len() {
                    let ra = old.get(a).map_or(usize::MAX, |e| e.0);
                    let rb = new.get(b).map_or(usize::MAX, |e| e.0);
                    if ra < rb {
                        row_count[ra] -= 1;
                        a += 1;
                    } else if rb < ra {
                        row_count[rb] += 1;
                        row_cols[rb].push(c2);
                        b += 1;
                    } else {
                        a += 1;
                        b += 1;
                    }
                }
                cols[c2] = (!new.is_empty()).then_some(new);
            }
            for &(i, _) in &pivot_col {
                row_count[i] -= 1;
            }
            row_alive[r] = false;
            units += 1;
            pivoted += 1;
        }
        if pivoted == 0 {
            if !any_unit {
                break;
            }
            threshold = if threshold == 0 { 1 } else { threshold * 4 };
            if threshold > 1 << 20 {
                break;
            }
        }
    }
    let live_cols: Vec<&Vec<(usize, i64)>> = cols.iter().flatten().collect();
    let mut row_index = vec![usize::MAX; m.rows];
    let mut nrows = 0;
    for c in &live_cols {
        for &(i, _) in c.iter() {
            if row_index[i] == usize::MAX {
                row_index[i] = nrows;
                nrows += 1;
            }
        }
    }
    let mut core = Matrix::zeros(nrows, live_cols.len());
    for (j, c) in live_cols.iter().enumerate() {
        for &(i, v) in c.iter() {
            core[(row_index[i], j)] = BigInt::from(v);
        }
    }
    let empty_rows = m.rows - units - nrows;
    Ok(Reduced { units, core, empty_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::smith_diagonal;

    #[test]
    fn elimination_preserves_invariants() {
        let dense = Matrix::<i64>::from_i64_rows(&[&[1, 1, 0, 0], &[1, -1, 2, 0], &[0, 2, 2, 0], &[0, 0, 0, 0]]);
        let sp = SparseMatrix::from_dense(&dense).unwrap();
        let red = eliminate_units(&sp).unwrap();
        let mut got: Vec<BigInt> = vec![BigInt::from(1); red.units];
        got.extend(smith_diagonal(&red.core));
        got.sort();
        let mut want = smith_diagonal(&dense);
        want.sort();
        assert_eq!(got, want);
        assert_eq!(red.units + red.core.rows() + red.empty_rows, 4);
    }
}
