//! Modules over integral group rings that are free as abelian groups, with
//! explicit bases and integer action matrices.

pub mod functors;
mod koszul;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::group::PresentedGroup;
use crate::linalg::{self, kernel_basis, smith_normal_form, AbelianInvariants, Lattice, Matrix};
use crate::{IntMatrix, SmallMatrix};

pub use koszul::{koszul_complex, KoszulComplex, KoszulVariant};

/// Largest rank for which dense action matrices are built.
pub const MAX_MODULE_RANK: usize = 2048;

pub type GroupRef = Arc<PresentedGroup>;

/// A `ZG`-module, free over `Z`. `actions[g]` is the matrix of group element `g`
/// acting on column vectors.
#[derive(Clone, Debug)]
pub struct GModule {
    group: GroupRef,
    rank: usize,
    actions: Vec<SmallMatrix>,
    labels: Option<Vec<String>>,
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.rank == other.rank && self.actions == other.actions
    }
}

fn check_rank(rank: usize) -> Result<()> {
    if rank > MAX_MODULE_RANK {
        return Err(Error::cap("module rank", rank, MAX_MODULE_RANK));
    }
    Ok(())
}

impl GModule {
    /// Extends generator matrices along the Cayley graph and checks that the
    /// result is a homomorphism.
    pub fn from_generator_actions(group: GroupRef, gens: Vec<SmallMatrix>) -> Result<Self> {
        let k = group.generator_count();
        if gens.len() != k {
            return Err(Error::Invalid(format!("{} action matrices for {k} generators", gens.len())));
        }
        let rank = gens.first().map_or(0, |m| m.rows());
        if k == 0 {
            return Self::from_element_actions(group, vec![Matrix::identity(rank)]);
        }
        check_rank(rank)?;
        for (i, m) in gens.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::Invalid(format!("action of x{} is not {rank} x {rank}", i + 1)));
            }
        }
        let g = group.group();
        let mut actions: Vec<Option<SmallMatrix>> = vec![None; g.order()];
        actions[0] = Some(Matrix::identity(rank));
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (i, m) in gens.iter().enumerate() {
                let t = g.mul(e, group.image(i));
                if actions[t].is_none() {
                    let prod = actions[e].as_ref().unwrap().try_mul(m).map_err(|_| Error::Invalid("action entries exceed i64".into()))?;
                    actions[t] = Some(prod);
                    queue.push_back(t);
                }
            }
        }
        let actions = actions.into_iter().map(|a| a.expect("images generate")).collect();
        Self::from_element_actions(group, actions)
    }

    /// Takes one matrix per group element and verifies it.
    pub fn from_element_actions(group: GroupRef, actions: Vec<SmallMatrix>) -> Result<Self> {
        let g = group.group();
        if actions.len() != g.order() {
            return Err(Error::Invalid(format!("{} matrices for a group of order {}", actions.len(), g.order())));
        }
        let rank = actions[0].rows();
        check_rank(rank)?;
        let m = GModule { group: group.clone(), rank, actions, labels: None };
        m.verify()?;
        Ok(m)
    }

    fn verify(&self) -> Result<()> {
        let g = self.group.group();
        if self.actions[0] != Matrix::identity(self.rank) {
            return Err(Error::NotAModule("identity does not act trivially".into()));
        }
        for (e, a) in self.actions.iter().enumerate() {
            if a.rows() != self.rank || a.cols() != self.rank {
                return Err(Error::Invalid(format!("action of element {e} has the wrong shape")));
            }
        }
        for e in 0..g.order() {
            for i in 0..self.group.generator_count() {
                let x = self.group.image(i);
                let prod = self.actions[e].try_mul(&self.actions[x]).map_err(|_| Error::Invalid("action entries exceed i64".into()))?;
                if prod != self.actions[g.mul(e, x)] {
                    return Err(Error::NotAModule(format!("element {e} times generator x{}", i + 1)));
                }
            }
        }
        let id = Matrix::identity(self.rank);
        for (i, r) in self.group.presentation().relators().iter().enumerate() {
            let mut acc = id.clone();
            for &l in r.letters() {
                acc = acc.try_mul(&self.actions[self.group.letter_image(l)]).map_err(|_| Error::Invalid("action entries exceed i64".into()))?;
            }
            if acc != id {
                return Err(Error::NotAModule(format!("relator {} ({r}) acts nontrivially", i + 1)));
            }
        }
        Ok(())
    }

    fn derived(&self, rank: usize, f: impl Fn(&SmallMatrix) -> SmallMatrix) -> Result<Self> {
        check_rank(rank)?;
        let actions = self.actions.iter().map(f).collect();
        Self::from_element_actions(self.group.clone(), actions)
    }

    pub fn trivial(group: GroupRef) -> Self {
        let n = group.order();
        GModule { group, rank: 1, actions: vec![Matrix::identity(1); n], labels: None }
    }

    /// `ZG` with left multiplication on the basis of group elements.
    pub fn regular(group: GroupRef) -> Result<Self> {
        let g = group.group();
        let n = g.order();
        check_rank(n)?;
        let actions = (0..n)
            .map(|a| {
                let mut m = Matrix::zeros(n, n);
                for b in 0..n {
                    m[(g.mul(a, b), b)] = 1;
                }
                m
            })
            .collect();
        let mut m = Self::from_element_actions(group.clone(), actions)?;
        m.labels = Some((0..n).map(|e| format!("e{e}")).collect());
        Ok(m)
    }

    /// `ZG^k`.
    pub fn free(group: GroupRef, k: usize) -> Result<Self> {
        let reg = Self::regular(group.clone())?;
        let mut out = GModule { group, rank: 0, actions: vec![Matrix::zeros(0, 0); reg.actions.len()], labels: None };
        for _ in 0..k {
            out = out.direct_sum(&reg)?;
        }
        Ok(out)
    }

    /// The augmentation ideal with basis `e_x - e_1`, `x != 1`.
    pub fn augmentation_ideal(group: GroupRef) -> Result<Self> {
        let g = group.group();
        let n = g.order();
        check_rank(n - 1)?;
        // a·(e_x - e_1) = (e_{ax} - e_1) - (e_a - e_1); basis index x - 1.
        let actions = (0..n)
            .map(|a| {
                let mut m = Matrix::zeros(n - 1, n - 1);
                for x in 1..n {
                    let ax = g.mul(a, x);
                    if ax != 0 {
                        m[(ax - 1, x - 1)] += 1;
                    }
                    if a != 0 {
                        m[(a - 1, x - 1)] -= 1;
                    }
                }
                m
            })
            .collect();
        let mut m = Self::from_element_actions(group.clone(), actions)?;
        m.labels = Some((1..n).map(|e| format!("e{e}-e0")).collect());
        Ok(m)
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank {
            return Err(Error::Invalid(format!("{} labels for rank {}", labels.len(), self.rank)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Matrix of group element `g`.
    pub fn element_action(&self, g: usize) -> &SmallMatrix {
        &self.actions[g]
    }

    pub fn element_actions(&self) -> &[SmallMatrix] {
        &self.actions
    }

    /// Matrix of generator `x_{i+1}`.
    pub fn generator_action(&self, i: usize) -> &SmallMatrix {
        &self.actions[self.group.image(i)]
    }

    fn same_group(&self, other: &GModule) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Diagonal action on `M ⊗ N`, index `i * rank(N) + j`.
    pub fn tensor(&self, other: &GModule) -> Result<Self> {
        self.same_group(other)?;
        check_rank(self.rank * other.rank)?;
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| a.try_kronecker(b).map_err(|_| Error::Invalid("action entries exceed i64".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_element_actions(self.group.clone(), actions)
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<Self> {
        self.same_group(other)?;
        let actions = self.actions.iter().zip(&other.actions).map(|(a, b)| a.block_diag(b)).collect();
        Self::from_element_actions(self.group.clone(), actions)
    }

    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        let rank = self.rank.checked_pow(n as u32).unwrap_or(usize::MAX);
        self.derived(rank, |a| functors::tensor_matrix(a, n))
    }

    pub fn sym_power(&self, n: usize) -> Result<Self> {
        self.derived(functors::binomial(self.rank + n - 1, n), |a| functors::sym_matrix(a, n))
    }

    pub fn ext_power(&self, n: usize) -> Result<Self> {
        self.derived(functors::binomial(self.rank, n), |a| functors::ext_matrix(a, n))
    }

    /// Symmetric tensors in `T^n`, as the joint kernel of `σ - 1` over the
    /// adjacent transpositions.
    pub fn div_power(&self, n: usize) -> Result<Self> {
        let r = self.rank;
        if n <= 1 {
            return if n == 0 { Ok(Self::trivial(self.group.clone())) } else { Ok(self.clone()) };
        }
        let t = self.tensor_power(n)?;
        let dim = t.rank;
        let mut stacked = Matrix::<i64>::zeros(0, dim);
        for k in 0..n - 1 {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(k, k + 1);
            let p = functors::position_permutation(r, n, &sigma);
            stacked = stacked.vstack(&p.try_sub(&Matrix::identity(dim)).unwrap());
        }
        let basis = kernel_basis(&stacked);
        t.submodule(&basis)
    }

    /// `T^n(M)·x` for the Lie element `x`; the image lattice is saturated in
    /// `T^n(M)` only on request.
    pub fn lie_power(&self, n: usize, saturate: bool) -> Result<Self> {
        if n == 0 {
            return Ok(Self::trivial(self.group.clone()));
        }
        let t = self.tensor_power(n)?;
        let x = functors::lie_element_matrix(self.rank, n);
        let mut lat = Lattice::from_columns(&x);
        if saturate {
            lat = lat.saturation();
        }
        t.submodule(&lat.basis_columns())
    }

    /// Restriction to the invariant sublattice spanned by the columns of `basis`.
    pub fn submodule(&self, basis: &IntMatrix) -> Result<Self> {
        if basis.rows() != self.rank {
            return Err(Error::Invalid(format!("basis of length {} in a module of rank {}", basis.rows(), self.rank)));
        }
        let k = basis.cols();
        if k == 0 {
            return Ok(GModule {
                group: self.group.clone(),
                rank: 0,
                actions: vec![Matrix::zeros(0, 0); self.actions.len()],
                labels: None,
            });
        }
        let h = linalg::hermite_normal_form(&basis.transpose(), false);
        if h.rank() != k {
            return Err(Error::Invalid("submodule basis is not linearly independent".into()));
        }
        let mut actions = Vec::with_capacity(self.actions.len());
        for (g, a) in self.actions.iter().enumerate() {
            let x = linalg::induced_action(basis, &a.to_big())
                .ok_or_else(|| Error::NotAModule(format!("sublattice not stable under element {g}")))?;
            actions.push(x.to_i64().ok_or_else(|| Error::Internal("induced action overflows i64".into()))?);
        }
        Self::from_element_actions(self.group.clone(), actions)
    }

    /// Generators of `(g - 1)M` over the presentation generators, as columns.
    pub fn augmentation_relations(&self) -> SmallMatrix {
        let id = Matrix::identity(self.rank);
        let mut out = Matrix::zeros(self.rank, 0);
        for i in 0..self.group.generator_count() {
            out = out.hstack(&self.generator_action(i).try_sub(&id).unwrap());
        }
        out
    }

    pub fn coinvariants(&self) -> Coinvariants {
        let rel = self.augmentation_relations();
        let snf = smith_normal_form(&rel.to_big());
        let diag: Vec<BigInt> = (0..self.rank).map(|i| if i < rel.cols() { snf.s[(i, i)].clone() } else { BigInt::zero() }).collect();
        let keep: Vec<usize> = (0..self.rank).filter(|&i| !diag[i].is_one()).collect();
        let orders: Vec<BigInt> = keep.iter().map(|&i| diag[i].clone()).collect();
        let free = orders.iter().filter(|d| d.is_zero()).count();
        let torsion: Vec<BigInt> = orders.iter().filter(|d| !d.is_zero()).cloned().collect();
        Coinvariants {
            invariants: AbelianInvariants::from_cyclic_orders(free, &torsion),
            projection: snf.u.select_rows(&keep),
            orders,
        }
    }

    /// Basis of `M^G` as columns.
    pub fn invariants(&self) -> IntMatrix {
        kernel_basis(&self.augmentation_relations().transpose())
    }

    pub fn mod_p(&self, p: i64) -> Result<ModP> {
        crate::linalg::check_prime(p)?;
        Ok(ModP {
            p,
            rank: self.rank,
            actions: (0..self.group.generator_count()).map(|i| self.generator_action(i).reduce_mod(&p)).collect(),
        })
    }

    /// `S^n -> T^n -> S^n` and `Ex^n -> T^n -> Ex^n` are both `n!`.
    pub fn symmetrization_roundtrip_check(&self, n: usize) -> Result<()> {
        let f = functors::factorial(n);
        for (name, (inc, proj)) in [
            ("symmetric", functors::sym_inclusion_projection(self.rank, n)),
            ("exterior", functors::ext_inclusion_projection(self.rank, n)),
        ] {
            let round = proj.try_mul(&inc).map_err(|_| Error::Invalid("action entries exceed i64".into()))?;
            let expect = Matrix::identity(round.rows()).try_scale(&f).unwrap();
            if round != expect {
                let j = (0..round.cols()).find(|&j| round.column(j) != expect.column(j)).unwrap();
                return Err(Error::Internal(format!(
                    "{name} round trip differs from {f}·id at column {j}: {:?}",
                    round.column(j)
                )));
            }
            // Equivariance of both maps on elements.
            for a in &self.actions {
                let (ta, fa) = match name {
                    "symmetric" => (functors::tensor_matrix(a, n), functors::sym_matrix(a, n)),
                    _ => (functors::tensor_matrix(a, n), functors::ext_matrix(a, n)),
                };
                if ta.try_mul(&inc).ok() != inc.try_mul(&fa).ok() {
                    return Err(Error::Internal(format!("{name} inclusion is not equivariant")));
                }
            }
        }
        Ok(())
    }
}

impl Serialize for GModule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gens: Vec<&SmallMatrix> = (0..self.group.generator_count()).map(|i| self.generator_action(i)).collect();
        let mut st = s.serialize_struct("GModule", 4)?;
        st.serialize_field("group", self.group.name())?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("actions", &gens)?;
        st.serialize_field("labels", &self.labels)?;
        st.end()
    }
}

/// `M_G` together with the projection `M -> ⊕ Z/orders[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coinvariants {
    pub invariants: AbelianInvariants,
    /// Row `i` maps `M` onto the `i`-th cyclic summand.
    pub projection: IntMatrix,
    /// Order of each cyclic summand, `0` for `Z`.
    pub orders: Vec<BigInt>,
}

/// Reduction of a module modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ModP {
    pub p: i64,
    pub rank: usize,
    pub actions: Vec<SmallMatrix>,
}
