//! Smith normal form with minimal-absolute-value pivoting.

use num_bigint::BigInt;

use super::matrix::Matrix;
use crate::scalar::{div_floor_pos, with_fallback, Overflow, Scalar};

/// `u * m * v = s`, `s` diagonal with `s[0,0] | s[1,1] | ...`, all nonnegative.
#[derive(Clone, Debug)]
pub struct Snf<T: Scalar> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> Snf<T> {
    /// Nonzero diagonal entries in order.
    pub fn diagonal(&self) -> Vec<T> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s[(i, i)].clone()).take_while(|d| !d.is_zero()).collect()
    }
}

struct Work<T: Scalar> {
    s: Matrix<T>,
    u: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(a, b);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(a, b);
        }
    }
    fn row_op(&mut self, dst: usize, q: &T, src: usize) -> Result<(), Overflow> {
        self.s.row_sub_mul(dst, q, src)?;
        if let Some(u) = self.u.as_mut() {
            u.row_sub_mul(dst, q, src)?;
        }
        Ok(())
    }
    fn col_op(&mut self, dst: usize, q: &T, src: usize) -> Result<(), Overflow> {
        self.s.col_sub_mul(dst, q, src)?;
        if let Some(v) = self.v.as_mut() {
            v.col_sub_mul(dst, q, src)?;
        }
        Ok(())
    }
}

fn snf_generic<T: Scalar>(a: &Matrix<T>, with_t: bool) -> Result<Work<T>, Overflow> {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        s: a.clone(),
        u: with_t.then(|| Matrix::identity(m)),
        v: with_t.then(|| Matrix::identity(n)),
    };
    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &w.s[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.s[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if x.is_unit() {
                        break;
                    }
                }
            }
            if best.is_some_and(|(bi, bj)| w.s[(bi, bj)].is_unit()) {
                break;
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w.s[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = div_floor_pos(&w.s[(i, t)], &w.s[(t, t)]);
                w.row_op(i, &q, t)?;
                dirty |= !r.is_zero();
            }
            for j in t + 1..n {
                if w.s[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = div_floor_pos(&w.s[(t, j)], &w.s[(t, t)]);
                w.col_op(j, &q, t)?;
                dirty |= !r.is_zero();
            }
            if dirty {
                let mut best: Option<(bool, usize)> = None;
                let mut best_abs: Option<T> = None;
                for i in t + 1..m {
                    let x = w.s[(i, t)].abs();
                    if !x.is_zero() && best_abs.as_ref().is_none_or(|b| &x < b) {
                        best_abs = Some(x);
                        best = Some((true, i));
                    }
                }
                for j in t + 1..n {
                    let x = w.s[(t, j)].abs();
                    if !x.is_zero() && best_abs.as_ref().is_none_or(|b| &x < b) {
                        best_abs = Some(x);
                        best = Some((false, j));
                    }
                }
                match best {
                    Some((true, i)) => w.swap_rows(t, i),
                    Some((false, j)) => w.swap_cols(t, j),
                    None => {}
                }
                continue;
            }
            let p = w.s[(t, t)].clone();
            if p.is_unit() {
                break;
            }
            let mut bad = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if !w.s[(i, j)].is_multiple_of(&p) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => w.row_op(t, &T::from_i64(-1), i)?,
                None => break,
            }
        }
        if w.s[(t, t)].is_negative() {
            w.s.negate_row(t)?;
            if let Some(u) = w.u.as_mut() {
                u.negate_row(t)?;
            }
        }
    }
    Ok(w)
}

fn to_snf<T: Scalar, S: Scalar>(w: Work<S>) -> Snf<T> {
    let conv = |m: &Matrix<S>| {
        m.try_map(|x| T::from_bigint(&x.to_bigint())).expect("Smith form entry does not fit the scalar type")
    };
    Snf {
        s: conv(&w.s),
        u: conv(w.u.as_ref().unwrap()),
        v: conv(w.v.as_ref().unwrap()),
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form<T: Scalar>(a: &Matrix<T>) -> Snf<T> {
    with_fallback(
        || {
            let small = a.to_i64().ok_or(Overflow)?;
            snf_generic(&small, true).map(to_snf)
        },
        || snf_generic(&a.to_big(), true).map(to_snf),
    )
}

/// The nonzero invariant factors (including units) of `a`, in divisibility order.
pub fn smith_diagonal<T: Scalar>(a: &Matrix<T>) -> Vec<BigInt> {
    let extract = |s: &Matrix<BigInt>| {
        (0..s.rows().min(s.cols()))
            .map(|i| s[(i, i)].clone())
            .take_while(|d| !num_traits::Zero::is_zero(d))
            .collect::<Vec<_>>()
    };
    with_fallback(
        || {
            let small = a.to_i64().ok_or(Overflow)?;
            snf_generic(&small, false).map(|w| extract(&w.s.to_big()))
        },
        || snf_generic(&a.to_big(), false).map(|w| extract(&w.s)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_reproduce_diagonal() {
        let a = Matrix::<i64>::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(&(&snf.u * &a) * &snf.v, snf.s);
        let d = snf.diagonal();
        for w in d.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let a = Matrix::<i64>::zeros(1, 1);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.s, a);
        assert_eq!(snf.u, Matrix::identity(1));
        assert_eq!(snf.v, Matrix::identity(1));
    }
}
