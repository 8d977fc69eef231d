//! Exact integral LLL reduction (δ = 3/4), used to keep kernel bases small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::Matrix;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`, ties away from zero.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(b);
    if &r * &two >= *b {
        q + 1
    } else {
        q
    }
}

struct State {
    b: Vec<Vec<BigInt>>,
    // 1-based: d[0] = 1, lambda[k][j] for j < k.
    d: Vec<BigInt>,
    lambda: Vec<Vec<BigInt>>,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        let two = BigInt::from(2);
        if (&self.lambda[k][l] * &two).abs() <= self.d[l] {
            return;
        }
        let q = round_div(&self.lambda[k][l], &self.d[l]);
        let bl = self.b[l - 1].clone();
        for (x, y) in self.b[k - 1].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        let dl = self.d[l].clone();
        self.lambda[k][l] -= &q * dl;
        for i in 1..l {
            let t = &q * &self.lambda[l][i];
            self.lambda[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k - 1, k - 2);
        for j in 1..k - 1 {
            let t = std::mem::take(&mut self.lambda[k][j]);
            self.lambda[k][j] = std::mem::replace(&mut self.lambda[k - 1][j], t);
        }
        let lam = self.lambda[k][k - 1].clone();
        let big_b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lambda[i][k - 1] = (&big_b * &t + &lam * &self.lambda[i][k]) / &self.d[k];
        }
        self.d[k - 1] = big_b;
    }
}

/// LLL-reduces the lattice spanned by the columns of `basis`, which must be
/// linearly independent. The result spans the same lattice.
pub fn lll_reduce(basis: &Matrix<BigInt>) -> Matrix<BigInt> {
    let n = basis.cols();
    if n < 2 {
        return basis.clone();
    }
    let mut s = State { b: basis.columns(), d: vec![BigInt::zero(); n + 1], lambda: vec![vec![BigInt::zero(); n + 1]; n + 1] };
    s.d[0] = BigInt::from(1);
    s.d[1] = dot(&s.b[0], &s.b[0]);
    let (mut k, mut kmax) = (2usize, 1usize);
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&s.b[k - 1], &s.b[j - 1]);
                for i in 1..j {
                    u = (&s.d[i] * &u - &s.lambda[k][i] * &s.lambda[j][i]) / &s.d[i - 1];
                }
                if j < k {
                    s.lambda[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "lll_reduce needs linearly independent columns");
                    s.d[k] = u;
                }
            }
        }
        loop {
            s.red(k, k - 1);
            let lhs = BigInt::from(4) * &s.d[k] * &s.d[k - 2];
            let rhs = BigInt::from(3) * &s.d[k - 1] * &s.d[k - 1] - BigInt::from(4) * &s.lambda[k][k - 1] * &s.lambda[k][k - 1];
            if lhs < rhs {
                s.swap(k, kmax);
                k = (k - 1).max(2);
                continue;
            }
            for l in (1..k - 1).rev() {
                s.red(k, l);
            }
            k += 1;
            break;
        }
    }
    Matrix::from_columns(basis.rows(), &s.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Lattice;

    #[test]
    fn reduces_a_skewed_basis() {
        let b = Matrix::<i64>::from_i64_rows(&[&[1, 1000001], &[0, 1], &[0, 0]]).to_big();
        let r = lll_reduce(&b);
        assert_eq!(Lattice::from_columns(&r), Lattice::from_columns(&b));
        let max = r.entries().iter().map(|x| x.abs()).max().unwrap();
        assert!(max <= BigInt::from(1), "{r:?}");
    }

    #[test]
    fn same_lattice_on_examples() {
        let b = Matrix::<i64>::from_i64_rows(&[&[1, -1, 3], &[1, 0, 5], &[1, 2, 6]]).to_big();
        let r = lll_reduce(&b);
        assert_eq!(Lattice::from_columns(&r), Lattice::from_columns(&b));
    }
}
