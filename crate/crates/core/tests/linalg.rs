use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

use frlab::linalg::{cokernel, determinant, kernel_basis, rank, smith_diagonal, solve, subquotient, Matrix};
use frlab::{AbelianInvariants, Lattice, SmallMatrix};

fn det_laplace(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_laplace(&minor)
            })
            .sum(),
    }
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = choose(n - 1, k);
    for mut c in choose(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Cokernel invariants from determinantal divisors: d_k = gcd of k×k minors.
fn cokernel_oracle(m: &[Vec<i64>], rows: usize, cols: usize) -> AbelianInvariants {
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in choose(rows, k) {
            for cs in choose(cols, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect()).collect();
                g = g.gcd(&det_laplace(&sub));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    let r = divisors.len() - 1;
    let orders: Vec<BigInt> = (1..=r).map(|k| BigInt::from(divisors[k] / divisors[k - 1])).collect();
    AbelianInvariants::from_cyclic_orders(rows - r, &orders)
}

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)))
}

/// Generators of a sublattice of Z^3, one per row.
fn lattice_gens() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=4)
}

fn to_matrix(rows: &[Vec<i64>]) -> SmallMatrix {
    Matrix::from_rows(rows.to_vec())
}

#[test]
fn known_cokernels() {
    let m = Matrix::<i64>::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    assert_eq!(cokernel(&m), AbelianInvariants::from_i64(0, &[2, 6, 12]));
    let m = Matrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3], &[0, 0]]);
    assert_eq!(cokernel(&m), AbelianInvariants::from_i64(1, &[6]));
}

#[test]
fn bigint_fallback_on_overflow() {
    let big = i64::MAX / 2;
    let m = Matrix::<i64>::from_i64_rows(&[&[big, big - 1], &[big - 1, big - 2]]);
    assert_eq!(determinant(&m), BigInt::from(-1));
    assert!(cokernel(&m).is_zero());
}

#[test]
fn subquotient_of_nested_lattices() {
    let sub = Matrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 1], &[0, 0]]);
    let rel = Matrix::<i64>::from_i64_rows(&[&[4], &[3], &[0]]);
    // span{2e1, e2} / span{4e1 + 3e2}: the coordinates (2, 3) give Z.
    assert_eq!(subquotient(3, &sub, &rel).unwrap(), AbelianInvariants::free(1));
    let escape = Matrix::<i64>::from_i64_rows(&[&[1], &[0], &[0]]);
    assert!(subquotient(3, &sub, &escape).is_err());
}

proptest! {
    #[test]
    fn cokernel_matches_determinantal_divisors((r, c, rows) in small_matrix()) {
        let m = to_matrix(&rows);
        prop_assert_eq!(cokernel(&m), cokernel_oracle(&rows, r, c));
    }

    #[test]
    fn smith_diagonal_divides((_r, _c, rows) in small_matrix()) {
        let d = smith_diagonal(&to_matrix(&rows));
        for w in d.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
            }
        }
    }

    #[test]
    fn kernel_is_annihilated_and_full((_r, c, rows) in small_matrix()) {
        let m = to_matrix(&rows);
        let k = kernel_basis(&m);
        prop_assert_eq!(k.cols(), c - rank(&m));
        prop_assert!((&m.to_big() * &k).is_zero());
    }

    #[test]
    fn solve_recovers_a_preimage((_r, c, rows) in small_matrix(), x in prop::collection::vec(-4i64..=4, 4)) {
        let m = to_matrix(&rows);
        let b = m.try_mul_vec(&x[..c]).unwrap();
        let y = solve(&m, &b).expect("b is in the image");
        let y: Vec<i64> = y.iter().map(|v| i64::try_from(v).unwrap()).collect();
        prop_assert_eq!(m.try_mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn lattice_sum_and_intersection(a in lattice_gens(), b in lattice_gens()) {
        let la = Lattice::from_rows_matrix(&Matrix::from_rows(a));
        let lb = Lattice::from_rows_matrix(&Matrix::from_rows(b));
        let (s, i) = (la.sum(&lb), la.intersect(&lb));
        prop_assert!(s.contains_lattice(&la) && s.contains_lattice(&lb));
        prop_assert!(la.contains_lattice(&i) && lb.contains_lattice(&i));
        prop_assert_eq!(s.rank() + i.rank(), la.rank() + lb.rank());
        prop_assert!(la.saturation().contains_lattice(&la));
    }
}
