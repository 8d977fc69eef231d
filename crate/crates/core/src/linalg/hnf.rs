//! Row-style Hermite normal form and the lattice operations built on it.

use num_bigint::BigInt;

use super::matrix::Matrix;
use crate::scalar::{div_floor_pos, with_fallback, Overflow, Scalar};

/// `h = u * a` with `h` in row Hermite form.
///
/// Nonzero rows come first; `pivots[i]` is the pivot column of row `i`, the
/// pivot is positive and entries above it lie in `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct Hnf<T: Scalar> {
    pub h: Matrix<T>,
    pub u: Option<Matrix<T>>,
    pub pivots: Vec<usize>,
}

impl<T: Scalar> Hnf<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`, a canonical basis of the row lattice.
    pub fn basis(&self) -> Matrix<T> {
        self.h.select_rows(&(0..self.rank()).collect::<Vec<_>>())
    }
}

pub(crate) fn hnf_generic<T: Scalar>(a: &Matrix<T>, with_u: bool) -> Result<Hnf<T>, Overflow> {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = with_u.then(|| Matrix::identity(m));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in row..m {
                let v = &h[(i, col)];
                if !v.is_zero() && best.is_none_or(|b| v.abs() < h[(b, col)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(row, b);
            if let Some(u) = u.as_mut() {
                u.swap_rows(row, b);
            }
            let mut clean = true;
            for i in row + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let (q, r) = div_floor_pos(&h[(i, col)], &h[(row, col)]);
                h.row_sub_mul(i, &q, row)?;
                if let Some(u) = u.as_mut() {
                    u.row_sub_mul(i, &q, row)?;
                }
                if !r.is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_row(row)?;
            if let Some(u) = u.as_mut() {
                u.negate_row(row)?;
            }
        }
        for i in 0..row {
            if h[(i, col)].is_zero() {
                continue;
            }
            let (q, _) = div_floor_pos(&h[(i, col)], &h[(row, col)]);
            h.row_sub_mul(i, &q, row)?;
            if let Some(u) = u.as_mut() {
                u.row_sub_mul(i, &q, row)?;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Ok(Hnf { h, u, pivots })
}

fn convert_hnf<T: Scalar>(h: Hnf<i64>) -> Hnf<T> {
    let conv = |m: &Matrix<i64>| m.map(|v| T::from_i64(*v));
    Hnf { h: conv(&h.h), u: h.u.as_ref().map(conv), pivots: h.pivots }
}

fn convert_big<T: Scalar>(h: Hnf<BigInt>) -> Hnf<T> {
    let conv = |m: &Matrix<BigInt>| {
        m.try_map(|v| T::from_bigint(v)).expect("Hermite form entry does not fit the scalar type")
    };
    Hnf { h: conv(&h.h), u: h.u.as_ref().map(conv), pivots: h.pivots }
}

/// Row Hermite normal form, computed in `i64` with a `BigInt` fallback.
pub fn hermite_normal_form<T: Scalar>(a: &Matrix<T>, with_transform: bool) -> Hnf<T> {
    with_fallback(
        || {
            let small = a.to_i64().ok_or(Overflow)?;
            hnf_generic(&small, with_transform).map(convert_hnf)
        },
        || hnf_generic(&a.to_big(), with_transform).map(convert_big),
    )
}

/// Coordinates of `v` in the echelon basis `basis` (rows of a Hermite form),
/// or the nonzero remainder when `v` is not in the row lattice.
pub(crate) fn echelon_coords<T: Scalar>(
    basis: &Matrix<T>,
    pivots: &[usize],
    v: &[T],
) -> Result<Result<Vec<T>, Vec<T>>, Overflow> {
    let mut rem = v.to_vec();
    let mut coords = vec![T::zero(); pivots.len()];
    for (i, &pc) in pivots.iter().enumerate() {
        if rem[pc].is_zero() {
            continue;
        }
        let (q, r) = rem[pc].div_rem(&basis[(i, pc)]);
        if !r.is_zero() {
            return Ok(Err(rem));
        }
        for j in pc..basis.cols() {
            let b = &basis[(i, j)];
            if !b.is_zero() {
                rem[j] = rem[j].sub_mul_c(&q, b)?;
            }
        }
        coords[i] = q;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Ok(Ok(coords))
    } else {
        Ok(Err(rem))
    }
}

/// A lattice in `Z^n` stored by its canonical Hermite basis (as rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Matrix<BigInt>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Matrix::zeros(0, dim), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Lattice { dim, basis: Matrix::identity(dim), pivots: (0..dim).collect() }
    }

    /// The lattice spanned by the columns of `gens`.
    pub fn from_columns<T: Scalar>(gens: &Matrix<T>) -> Self {
        Self::from_rows_matrix(&gens.transpose())
    }

    /// The lattice spanned by the rows of `gens`.
    pub fn from_rows_matrix<T: Scalar>(gens: &Matrix<T>) -> Self {
        let h = hermite_normal_form(&gens.to_big(), false);
        Lattice { dim: gens.cols(), basis: h.basis(), pivots: h.pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis vectors as rows.
    pub fn basis_rows(&self) -> &Matrix<BigInt> {
        &self.basis
    }

    /// Basis vectors as columns.
    pub fn basis_columns(&self) -> Matrix<BigInt> {
        self.basis.transpose()
    }

    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        echelon_coords(&self.basis, &self.pivots, v).expect("bigint").ok()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.rank()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_rows_matrix(&self.basis.vstack(&other.basis))
    }

    /// Intersection by the kernel of `[A^T | -B^T]`.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let (a, b) = (self.rank(), other.rank());
        if a == 0 || b == 0 {
            return Lattice::zero(self.dim);
        }
        let stacked = self.basis_columns().hstack(&other.basis_columns().try_scale(&BigInt::from(-1)).unwrap());
        let ker = super::kernel_basis(&stacked);
        let coeffs = ker.select_rows(&(0..a).collect::<Vec<_>>());
        let vecs = self.basis_columns().try_mul(&coeffs).unwrap();
        Lattice::from_columns(&vecs)
    }

    /// The smallest saturated lattice containing this one.
    pub fn saturation(&self) -> Lattice {
        if self.rank() == 0 {
            return self.clone();
        }
        let complement = super::kernel_basis(&self.basis);
        let ann = super::kernel_basis(&complement.transpose());
        Lattice::from_columns(&ann)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_small_matrix() {
        let a = Matrix::<BigInt>::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let h = hermite_normal_form(&a, true);
        assert_eq!(h.u.as_ref().unwrap() * &a, h.h);
        assert_eq!(h.pivots, vec![0, 1, 2]);
        for (i, &p) in h.pivots.iter().enumerate() {
            assert!(h.h[(i, p)] > BigInt::from(0));
            for k in 0..i {
                assert!(h.h[(k, p)] >= BigInt::from(0) && h.h[(k, p)] < h.h[(i, p)]);
            }
        }
    }

    #[test]
    fn lattice_intersection() {
        let a = Lattice::from_rows_matrix(&Matrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 1]]));
        let b = Lattice::from_rows_matrix(&Matrix::<i64>::from_i64_rows(&[&[1, 1], &[0, 3]]));
        let c = a.intersect(&b);
        assert_eq!(c.rank(), 2);
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(c.contains(&big(&[2, 2])));
        assert!(!c.contains(&big(&[0, 1])));
        assert!(c.contains(&big(&[0, 3])));
        assert!(a.contains_lattice(&c) && b.contains_lattice(&c));
    }

    #[test]
    fn saturation_recovers_line() {
        let a = Lattice::from_rows_matrix(&Matrix::<i64>::from_i64_rows(&[&[2, 4]]));
        let s = a.saturation();
        assert!(s.contains(&[BigInt::from(1), BigInt::from(2)]));
        assert_eq!(s.rank(), 1);
    }
}
