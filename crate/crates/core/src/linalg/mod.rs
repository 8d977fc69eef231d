//! Exact integer linear algebra.

mod abelian;
mod hnf;
mod lll;
mod matrix;
mod snf;
pub mod sparse;

pub use abelian::{factorize, is_prime, AbelianInvariants};
pub(crate) use abelian::check_prime;
pub use hnf::{hermite_normal_form, Hnf, Lattice};
pub use lll::lll_reduce;
pub use matrix::Matrix;
pub use snf::{smith_diagonal, smith_normal_form, Snf};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use sparse::SparseMatrix;

/// Rank and nontrivial invariant factors (all `> 1`) of a sparse matrix.
pub fn sparse_invariants(m: &SparseMatrix, max_dense: usize) -> Result<(usize, Vec<BigInt>)> {
    let (units, core) = match sparse::eliminate_units(m) {
        Ok(red) => (red.units, red.core),
        Err(_) => (0, m.to_dense()),
    };
    if core.rows().min(core.cols()) > max_dense {
        return Err(Error::cap("dense core after sparse elimination", core.rows().min(core.cols()), max_dense));
    }
    let diag = smith_diagonal(&core);
    let rank = units + diag.len();
    Ok((rank, diag.into_iter().filter(|d| !d.is_one()).collect()))
}

fn dense_invariants<T: Scalar>(m: &Matrix<T>) -> (usize, Vec<BigInt>) {
    match SparseMatrix::from_dense(m) {
        Some(sp) => sparse_invariants(&sp, usize::MAX).expect("no cap"),
        None => {
            let diag = smith_diagonal(m);
            (diag.len(), diag.into_iter().filter(|d| !d.is_one()).collect())
        }
    }
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    dense_invariants(m).0
}

/// `Z^rows / column-span(m)`.
pub fn cokernel<T: Scalar>(m: &Matrix<T>) -> AbelianInvariants {
    let (r, torsion) = dense_invariants(m);
    AbelianInvariants::from_cyclic_orders(m.rows() - r, &torsion)
}

pub fn cokernel_sparse(m: &SparseMatrix, max_dense: usize) -> Result<AbelianInvariants> {
    let (r, torsion) = sparse_invariants(m, max_dense)?;
    Ok(AbelianInvariants::from_cyclic_orders(m.rows - r, &torsion))
}

/// A saturated basis of the integer null space, as the columns of the result.
///
/// The basis is returned in Hermite form (as rows before transposing), so it
/// is canonical for a given matrix.
pub fn kernel_basis<T: Scalar>(m: &Matrix<T>) -> Matrix<BigInt> {
    let n = m.cols();
    if m.rows() == 0 {
        return Matrix::identity(n);
    }
    let h = hermite_normal_form(&m.transpose().to_big(), true);
    let k = h.rank();
    let u = h.u.expect("transform requested");
    let rows: Vec<usize> = (k..n).collect();
    let ker = u.select_rows(&rows);
    if ker.rows() == 0 {
        return Matrix::zeros(n, 0);
    }
    hermite_normal_form(&ker, false).basis().transpose()
}

/// Express `b` as an integer combination of the columns of `a`.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Option<Vec<BigInt>> {
    let sol = solve_columns(a, &Matrix::from_columns(b.len(), &[b.to_vec()]))?;
    Some(sol.column(0))
}

/// Finds `x` with `a * x = b`, or `None` when some column of `b` is not in
/// the column lattice of `a`.
pub fn solve_columns<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Option<Matrix<BigInt>> {
    assert_eq!(a.rows(), b.rows());
    let at = a.transpose().to_big();
    let h = hermite_normal_form(&at, true);
    let u = h.u.as_ref().expect("transform requested");
    let basis = h.basis();
    let mut x = Matrix::zeros(a.cols(), b.cols());
    for j in 0..b.cols() {
        let col: Vec<BigInt> = b.column(j).iter().map(Scalar::to_bigint).collect();
        let y = hnf::echelon_coords(&basis, &h.pivots, &col).expect("bigint").ok()?;
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for r in 0..a.cols() {
                let v = &u[(i, r)];
                if !v.is_zero() {
                    x[(r, j)] += yi * v;
                }
            }
        }
    }
    Some(x)
}

/// `span(sub) / span(rel)` for columns in `Z^ambient`.
pub fn subquotient<T: Scalar>(ambient: usize, sub: &Matrix<T>, rel: &Matrix<T>) -> Result<AbelianInvariants> {
    assert_eq!(sub.rows(), ambient, "sub_gens must live in the ambient lattice");
    assert_eq!(rel.rows(), ambient, "rel_gens must live in the ambient lattice");
    let h = hermite_normal_form(&sub.transpose().to_big(), false);
    let basis = h.basis();
    let mut coords = Matrix::zeros(h.rank(), rel.cols());
    for j in 0..rel.cols() {
        let col: Vec<BigInt> = rel.column(j).iter().map(Scalar::to_bigint).collect();
        match hnf::echelon_coords(&basis, &h.pivots, &col).expect("bigint") {
            Ok(c) => {
                for (i, v) in c.into_iter().enumerate() {
                    coords[(i, j)] = v;
                }
            }
            Err(_) => return Err(Error::RelationsEscape { column: j, witness: col }),
        }
    }
    Ok(cokernel(&coords))
}

/// Matrix of the restriction of `action` to the lattice spanned by the
/// columns of `basis` (which must be invariant): `action * basis = basis * x`.
pub fn induced_action<T: Scalar>(basis: &Matrix<T>, action: &Matrix<T>) -> Option<Matrix<BigInt>> {
    let image = action.to_big().try_mul(&basis.to_big()).ok()?;
    solve_columns(&basis.to_big(), &image)
}

pub fn determinant<T: Scalar>(m: &Matrix<T>) -> BigInt {
    assert!(m.is_square());
    let snf = smith_normal_form(&m.to_big());
    // det(U) det(M) det(V) = prod diag; det of unimodular transforms via Bareiss.
    let prod = (0..m.rows()).fold(BigInt::one(), |acc, i| acc * &snf.s[(i, i)]);
    prod * bareiss(&snf.u) * bareiss(&snf.v)
}

/// Fraction-free determinant.
pub fn bareiss(m: &Matrix<BigInt>) -> BigInt {
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn m(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        let s = smith_normal_form(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&m(&[&[2, 0], &[0, 0]])), AbelianInvariants::from_i64(1, &[2]));
        assert_eq!(cokernel(&m(&[&[2, 0], &[0, 3]])), AbelianInvariants::cyclic(6));
        assert_eq!(cokernel(&Matrix::<BigInt>::zeros(3, 0)), AbelianInvariants::free(3));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&m(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![BigInt::one(); 2]);
        assert_eq!(kernel_basis(&m(&[&[1, 0], &[0, 1]])).cols(), 0);
        let k = kernel_basis(&m(&[&[2, -2]]));
        assert_eq!(k.column(0), vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn subquotient_escape_has_witness() {
        let sub = m(&[&[2], &[0]]);
        let rel = m(&[&[1], &[0]]);
        assert!(matches!(subquotient(2, &sub, &rel), Err(Error::RelationsEscape { column: 0, .. })));
        let rel = m(&[&[6], &[0]]);
        assert_eq!(subquotient(2, &sub, &rel).unwrap(), AbelianInvariants::cyclic(3));
    }

    #[test]
    fn solve_roundtrip() {
        let a = m(&[&[2, 0], &[1, 3]]);
        let x = solve(&a, &[BigInt::from(4), BigInt::from(5)]).unwrap();
        assert_eq!(a.try_mul_vec(&x).unwrap(), vec![BigInt::from(4), BigInt::from(5)]);
        assert!(solve(&a, &[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn determinant_matches_bareiss() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a), bareiss(&a));
        assert_eq!(bareiss(&a), BigInt::from(18));
    }
}
