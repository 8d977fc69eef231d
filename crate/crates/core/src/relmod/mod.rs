//! Fox calculus and the relation module of a presentation.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freering::FreeRingElement;
use crate::gmodule::{GModule, GroupRef};
use crate::group::{PresentedGroup, Word};
use crate::linalg::{cokernel, kernel_basis, solve_columns, subquotient, AbelianInvariants, Lattice, Matrix};
use crate::IntMatrix;

/// `∂w/∂x_i` in the free group ring.
pub fn fox_derivative(w: &Word, i: usize) -> FreeRingElement {
    let mut out = FreeRingElement::zero();
    let mut prefix = Word::identity();
    for &l in w.letters() {
        if l.gen() == i {
            if l.is_inverse() {
                out = out.sub(&FreeRingElement::word(prefix.mul(&Word::letter(l))));
            } else {
                out = out.add(&FreeRingElement::word(prefix.clone()));
            }
        }
        prefix = prefix.mul(&Word::letter(l));
    }
    out
}

/// Images of the Fox derivatives of each relator in `ZG`, as a
/// `(relators) x (generators)` table of coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxJacobian {
    pub entries: Vec<Vec<Vec<BigInt>>>,
}

pub fn fox_jacobian(pg: &PresentedGroup) -> Result<FoxJacobian> {
    let k = pg.generator_count();
    let entries = pg
        .presentation()
        .relators()
        .iter()
        .map(|r| (0..k).map(|i| fox_derivative(r, i).project(pg)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let jac = FoxJacobian { entries };
    jac.check_identity(pg)?;
    Ok(jac)
}

impl FoxJacobian {
    /// `Σ_i (∂r/∂x_i)(x_i - 1) = r - 1 = 0` in `ZG` for every relator.
    pub fn check_identity(&self, pg: &PresentedGroup) -> Result<()> {
        let g = pg.group();
        for (j, row) in self.entries.iter().enumerate() {
            let mut total = vec![BigInt::zero(); pg.order()];
            for (i, d) in row.iter().enumerate() {
                let x = pg.image(i);
                for (e, c) in d.iter().enumerate() {
                    total[g.mul(e, x)] += c;
                    total[e] -= c;
                }
            }
            if total.iter().any(|c| !c.is_zero()) {
                return Err(Error::Internal(format!("Fox identity fails for relator {}", j + 1)));
            }
        }
        Ok(())
    }

    /// Row `j` flattened to `Z^{k|G|}` with index `i·|G| + g`.
    pub fn row_vector(&self, j: usize) -> Vec<BigInt> {
        self.entries[j].iter().flatten().cloned().collect()
    }
}

/// `R_ab` inside `P = ZG^k`, with the sequence `R_ab ↪ P ↠ g`.
#[derive(Clone, Debug)]
pub struct RelationModule {
    pub module: GModule,
    /// Columns: the basis of `R_ab` in `P` coordinates.
    pub inclusion: IntMatrix,
    pub free: GModule,
    /// `P -> Z^{|G|}`, `e_{i,g} -> g(x_i - 1)`.
    pub boundary: Matrix<i64>,
}

/// The relation module of the presentation.
pub fn relation_module(pg: &GroupRef) -> Result<RelationModule> {
    let g = pg.group();
    let n = g.order();
    let k = pg.generator_count();
    let mut boundary = Matrix::<i64>::zeros(n, k * n);
    for i in 0..k {
        let x = pg.image(i);
        for e in 0..n {
            boundary[(g.mul(e, x), i * n + e)] += 1;
            boundary[(e, i * n + e)] -= 1;
        }
    }
    let inclusion = kernel_basis(&boundary);
    let expect = n * (k.max(1) - 1) + 1;
    if k > 0 && inclusion.cols() != expect {
        return Err(Error::Internal(format!("relation module rank {} != {expect}", inclusion.cols())));
    }
    // The image of the boundary is the augmentation ideal: corank 1, no torsion.
    let coker = cokernel(&boundary);
    if coker != AbelianInvariants::free(1) {
        return Err(Error::Internal(format!("cokernel of P -> ZG is {coker}, expected Z")));
    }
    let free = GModule::free(pg.clone(), k)?;
    let module = free.submodule(&inclusion)?;
    let rm = RelationModule { module, inclusion, free, boundary };
    rm.check_relators(pg)?;
    Ok(rm)
}

impl RelationModule {
    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    /// Coordinates of each relator class in the basis of `R_ab`.
    pub fn relator_classes(&self, pg: &PresentedGroup) -> Result<IntMatrix> {
        let jac = fox_jacobian(pg)?;
        let rows = jac.entries.len();
        let cols: Vec<Vec<BigInt>> = (0..rows).map(|j| jac.row_vector(j)).collect();
        let vecs = Matrix::from_columns(self.inclusion.rows(), &cols);
        solve_columns(&self.inclusion, &vecs).ok_or_else(|| Error::Internal("relator class escapes the kernel".into()))
    }

    /// Relator classes lie in `R_ab` and generate it as a module.
    fn check_relators(&self, pg: &PresentedGroup) -> Result<()> {
        let classes = self.relator_classes(pg)?;
        let g = pg.group();
        let mut gens = Matrix::<BigInt>::zeros(self.rank(), 0);
        for e in 0..g.order() {
            let act = self.module.element_action(e).to_big();
            gens = gens.hstack(&act.try_mul(&classes).unwrap());
        }
        if Lattice::from_columns(&gens).rank() != self.rank() || !subquotient(self.rank(), &Matrix::identity(self.rank()), &gens)?.is_zero() {
            return Err(Error::Internal("relator classes do not generate the relation module".into()));
        }
        Ok(())
    }

    /// `ker((R_ab)_G -> P_G)`.
    pub fn hopf_h2(&self) -> Result<AbelianInvariants> {
        let n = self.module.group().order();
        let k = self.inclusion.rows() / n.max(1);
        // P_G = Z^k by summing each block.
        let mut aug = Matrix::<BigInt>::zeros(k, self.inclusion.rows());
        for t in 0..self.inclusion.rows() {
            aug[(t / n, t)] = BigInt::one();
        }
        let psi = aug.try_mul(&self.inclusion).unwrap();
        let ker = kernel_basis(&psi);
        let rel = self.module.augmentation_relations().to_big();
        subquotient(self.rank(), &ker, &rel)
    }
}

pub fn hopf_h2(pg: &GroupRef) -> Result<AbelianInvariants> {
    relation_module(pg)?.hopf_h2()
}

/// Convenience for callers holding a bare presented group.
pub fn relation_module_of(pg: PresentedGroup) -> Result<RelationModule> {
    relation_module(&Arc::new(pg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use crate::group::GroupFile;

    fn group(degree: usize, gens: Vec<Vec<Vec<usize>>>, rels: &[&str]) -> GroupRef {
        Arc::new(
            GroupFile { name: None, degree, generators: gens, relators: rels.iter().map(|s| s.to_string()).collect() }
                .build(&Caps::default())
                .unwrap(),
        )
    }

    #[test]
    fn fox_examples() {
        let x = Word::generator(0);
        assert_eq!(fox_derivative(&x, 0), FreeRingElement::one());
        let x2 = Word::power_of(0, 2);
        assert_eq!(fox_derivative(&x2, 0), FreeRingElement::one().add(&FreeRingElement::word(x.clone())));
        let y = Word::generator(1);
        let c = Word::commutator(&x, &y);
        // ∂[x,y]/∂x = 1 - x y x^-1
        let expect = FreeRingElement::one().sub(&FreeRingElement::word(x.mul(&y).mul(&x.inverse())));
        assert_eq!(fox_derivative(&c, 0), expect);
        let xi = Word::power_of(0, -1);
        assert_eq!(fox_derivative(&xi, 0), FreeRingElement::word(xi.clone()).neg());
    }

    #[test]
    fn relation_module_ranks() {
        let c3 = Arc::new(PresentedGroup::cyclic(3, &Caps::default()).unwrap());
        let rm = relation_module(&c3).unwrap();
        assert_eq!(rm.rank(), 1);
        assert_eq!(rm.module.generator_action(0), &Matrix::identity(1));
        let v4 = group(4, vec![vec![vec![1, 2]], vec![vec![3, 4]]], &["x1^2", "x2^2", "x1 x2 x1^-1 x2^-1"]);
        let rm = relation_module(&v4).unwrap();
        assert_eq!(rm.rank(), 5);
        assert_eq!(rm.hopf_h2().unwrap(), AbelianInvariants::cyclic(2));
        let c3_2 = group(3, vec![vec![vec![1, 2, 3]], vec![]], &["x1^3", "x2"]);
        assert_eq!(relation_module(&c3_2).unwrap().rank(), 4);
        assert!(hopf_h2(&c3_2).unwrap().is_zero());
    }

    #[test]
    fn hopf_of_s3() {
        let s3 = group(3, vec![vec![vec![1, 2]], vec![vec![1, 2, 3]]], &["x1^2", "x2^3", "x1 x2 x1 x2"]);
        assert!(hopf_h2(&s3).unwrap().is_zero());
    }
}
