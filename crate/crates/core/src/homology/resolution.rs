//! Free resolutions of the trivial module over an integral group ring.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::freering::FreeRingElement;
use crate::gmodule::{GModule, GroupRef};
use crate::group::{PresentedGroup, Word};
use crate::linalg::sparse::SparseMatrix;
use crate::linalg::{kernel_basis, lll_reduce, sparse_invariants, Lattice, Matrix};

/// A `ZG`-linear map `ZG^cols -> ZG^rows`. Column `j` lists the image of the
/// basis vector `e_j` as triples `(i, k, c)` meaning `c·k·e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZgMatrix {
    pub rows: usize,
    pub columns: Vec<Vec<(usize, usize, i64)>>,
}

impl ZgMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    fn push(&mut self, mut entries: Vec<(usize, usize, i64)>) {
        entries.sort_unstable_by_key(|e| (e.0, e.1));
        let mut col: Vec<(usize, usize, i64)> = Vec::with_capacity(entries.len());
        for (i, k, c) in entries {
            match col.last_mut() {
                Some(last) if (last.0, last.1) == (i, k) => last.2 += c,
                _ => col.push((i, k, c)),
            }
        }
        col.retain(|e| e.2 != 0);
        self.columns.push(col);
    }

    /// The underlying `Z`-linear map. Basis vector `k·e_i` has index
    /// `i·|G| + k`.
    pub fn to_integral(&self, pg: &PresentedGroup) -> SparseMatrix {
        let g = pg.group();
        let n = g.order();
        let mut m = SparseMatrix::new(self.rows * n);
        for col in &self.columns {
            for h in 0..n {
                m.push_column(col.iter().map(|&(i, k, c)| (i * n + g.mul(h, k), c)).collect());
            }
        }
        m
    }

    /// `M ⊗_G (−)` applied to this map, with `M` made a right module by
    /// `m·k = k^-1 m`. Basis vector `b ⊗ e_i` has index `i·rank(M) + b`.
    pub fn tensor_module(&self, module: &GModule) -> SparseMatrix {
        let g = module.group().group();
        let r = module.rank();
        let mut m = SparseMatrix::new(self.rows * r);
        for col in &self.columns {
            for a in 0..r {
                let mut entries = Vec::new();
                for &(i, k, c) in col {
                    let act = module.element_action(g.inv(k));
                    for b in 0..r {
                        let v = act[(b, a)];
                        if v != 0 {
                            entries.push((i * r + b, c * v));
                        }
                    }
                }
                m.push_column(entries);
            }
        }
        m
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &ZgMatrix, pg: &PresentedGroup) -> ZgMatrix {
        let g = pg.group();
        let mut out = ZgMatrix { rows: self.rows, columns: Vec::new() };
        for col in &rhs.columns {
            let mut entries = Vec::new();
            for &(j, k, c) in col {
                for &(i, k2, c2) in &self.columns[j] {
                    entries.push((i, g.mul(k, k2), c * c2));
                }
            }
            out.push(entries);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionKind {
    /// Normalized bar resolution.
    Bar,
    /// Alternating `x - 1` and the norm element, for cyclic groups.
    Periodic,
    /// Filtration quotients of powers of the relation ideal, for `<x | x^m>`.
    Gruenberg,
    /// Greedy `ZG`-generators of integral kernels.
    Reduced,
}

/// `… -> P_2 -> P_1 -> P_0 -> Z`, with `P_n = ZG^ranks[n]` and
/// `differentials[n - 1]: P_n -> P_{n-1}`. The augmentation sends every group
/// element in `P_0 = ZG` to 1.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub kind: ResolutionKind,
    pub group: GroupRef,
    pub ranks: Vec<usize>,
    pub differentials: Vec<ZgMatrix>,
}

impl Resolution {
    pub fn max_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `∂∂ = 0` and `ε∂ = 0`.
    pub fn check_composites(&self) -> Result<()> {
        if let Some(d1) = self.differentials.first() {
            for (j, col) in d1.columns.iter().enumerate() {
                let s: i64 = col.iter().map(|e| e.2).sum();
                if s != 0 {
                    return Err(Error::Internal(format!("augmentation of d1(e{j}) is {s}")));
                }
            }
        }
        for n in 1..self.differentials.len() {
            let c = self.differentials[n - 1].compose(&self.differentials[n], &self.group);
            if !c.is_zero() {
                return Err(Error::Internal(format!("d{} ∘ d{} is nonzero", n, n + 1)));
            }
        }
        Ok(())
    }

    /// Exactness of the underlying integral complex in degrees `0..top`:
    /// ranks add up and each image is saturated.
    pub fn check_exact(&self, top: usize, max_dense: usize) -> Result<()> {
        let n = self.group.order();
        if top > self.differentials.len() {
            return Err(Error::Invalid(format!("exactness up to {top} needs degree {top} built")));
        }
        let mut prev_rank = 1usize; // rank of the augmentation
        for deg in 0..top {
            let d = self.differentials[deg].to_integral(&self.group);
            let (r, torsion) = sparse_invariants(&d, max_dense)?;
            let dim = self.ranks[deg] * n;
            if r + prev_rank != dim || !torsion.is_empty() {
                return Err(Error::Internal(format!("{:?} resolution is not exact in degree {deg}", self.kind)));
            }
            prev_rank = r;
        }
        Ok(())
    }
}

fn bar_index(cells: &[usize], base: usize) -> usize {
    cells.iter().fold(0, |acc, &g| acc * base + (g - 1))
}

/// Normalized bar resolution up to degree `n_max`: basis `[g_1|…|g_n]` with
/// all `g_i ≠ 1`.
pub fn bar_resolution(group: GroupRef, n_max: usize, caps: &Caps) -> Result<Resolution> {
    if n_max > caps.max_bar_degree {
        return Err(Error::cap("bar resolution degree", n_max, caps.max_bar_degree));
    }
    let g = group.group();
    let order = g.order();
    let base = order - 1;
    let mut ranks = vec![1usize];
    for n in 1..=n_max {
        let r = base
            .checked_pow(n as u32)
            .filter(|&r| r <= caps.max_bar_rank)
            .ok_or_else(|| Error::cap("bar resolution rank", base.saturating_pow(n as u32), caps.max_bar_rank))?;
        ranks.push(r);
    }
    let mut differentials = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut d = ZgMatrix { rows: ranks[n - 1], columns: Vec::with_capacity(ranks[n]) };
        let mut cells = vec![1usize; n];
        for _ in 0..ranks[n] {
            let mut entries = Vec::with_capacity(n + 1);
            entries.push((bar_index(&cells[1..], base), cells[0], 1));
            for i in 0..n - 1 {
                let prod = g.mul(cells[i], cells[i + 1]);
                if prod != 0 {
                    let mut face: Vec<usize> = cells[..i].to_vec();
                    face.push(prod);
                    face.extend_from_slice(&cells[i + 2..]);
                    let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                    entries.push((bar_index(&face, base), 0, sign));
                }
            }
            let sign = if n % 2 == 0 { 1 } else { -1 };
            entries.push((bar_index(&cells[..n - 1], base), 0, sign));
            d.push(entries);
            // odometer over 1..order, last cell fastest
            for pos in (0..n).rev() {
                cells[pos] += 1;
                if cells[pos] < order {
                    break;
                }
                cells[pos] = 1;
            }
        }
        differentials.push(d);
    }
    let res = Resolution { kind: ResolutionKind::Bar, group, ranks, differentials };
    res.check_composites()?;
    Ok(res)
}

/// Generator `x1` and its order, provided it generates the group.
fn cyclic_generator(pg: &PresentedGroup) -> Result<(usize, usize)> {
    if pg.generator_count() == 0 {
        return Err(Error::Invalid("group has no generators".into()));
    }
    let x = pg.image(0);
    let m = pg.group().element_order(x);
    if m != pg.order() {
        return Err(Error::Invalid(format!("x1 has order {m}, group has order {}", pg.order())));
    }
    Ok((x, m))
}

/// Periodic resolution of a cyclic group generated by `x1`.
pub fn cyclic_periodic_resolution(group: GroupRef, n_max: usize) -> Result<Resolution> {
    let (x, m) = cyclic_generator(&group)?;
    let g = group.group();
    let mut differentials = Vec::new();
    for n in 1..=n_max {
        let mut d = ZgMatrix { rows: 1, columns: Vec::new() };
        if n % 2 == 1 {
            d.push(vec![(0, x, 1), (0, 0, -1)]);
        } else {
            d.push((0..m).map(|i| (0, g.pow(x, i as u64), 1)).collect());
        }
        differentials.push(d);
    }
    let res = Resolution { kind: ResolutionKind::Periodic, group, ranks: vec![1; n_max + 1], differentials };
    res.check_composites()?;
    Ok(res)
}

/// The resolution `… -> f h/f h^2 -> h/h^2 -> f/f h -> Z[F]/h -> Z` for the
/// presentation `<x | x^m>`.
///
/// Each term is free of rank one on `(x^m - 1)^k` or `(x - 1)(x^m - 1)^k`, and
/// each differential is found by exact division of consecutive basis
/// elements in the free group ring.
pub fn gruenberg_resolution_cyclic(group: GroupRef, n_max: usize) -> Result<Resolution> {
    let pres = group.presentation();
    let (_, m) = cyclic_generator(&group)?;
    let rel_ok = pres.generator_count() == 1
        && pres.relators().len() == 1
        && pres.relators()[0].exponent_sums(1)[0].unsigned_abs() as usize == m
        && pres.relators()[0].len() == m;
    if !rel_ok {
        return Err(Error::Invalid("Gruenberg resolution needs the presentation <x1 | x1^m>".into()));
    }
    let h = FreeRingElement::word_minus_one(&Word::power_of(0, m as i64));
    let f = FreeRingElement::word_minus_one(&Word::generator(0));
    let basis = |n: usize| {
        let hk = h.pow((n / 2) as u32);
        if n % 2 == 0 {
            hk
        } else {
            f.mul(&hk)
        }
    };
    let mut differentials = Vec::new();
    for n in 1..=n_max {
        let (hi, lo) = (basis(n), basis(n - 1));
        let c = hi.div_exact_one_generator(&lo).ok_or_else(|| {
            Error::Internal(format!("basis element of degree {n} is not a multiple of degree {}", n - 1))
        })?;
        let proj = c.project(&group)?;
        let mut d = ZgMatrix { rows: 1, columns: Vec::new() };
        let entries = proj
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| v.to_i64().map(|v| (0, k, v)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Internal("coefficient overflow".into()))?;
        d.push(entries);
        differentials.push(d);
    }
    let res = Resolution { kind: ResolutionKind::Gruenberg, group, ranks: vec![1; n_max + 1], differentials };
    res.check_composites()?;
    res.check_exact(n_max, usize::MAX)?;
    Ok(res)
}

/// Builds a resolution by choosing, in each degree, `ZG`-module generators of
/// the integral kernel of the previous map. A kernel basis vector becomes a
/// new generator only if it is not yet in the span of the orbits of the
/// generators already chosen.
pub fn reduced_resolution(group: GroupRef, n_max: usize) -> Result<Resolution> {
    let g = group.group();
    let n = g.order();
    let eps = Matrix::<i64>::from_vec(1, n, vec![1; n]);
    let mut kernel = kernel_basis(&eps);
    let mut ranks = vec![1usize];
    let mut differentials = Vec::new();
    for _ in 1..=n_max {
        let prev_rank = *ranks.last().unwrap();
        let dim = prev_rank * n;
        let mut span = Lattice::zero(dim);
        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        for v in kernel.columns() {
            if span.contains(&v) {
                continue;
            }
            let mut orbit = Matrix::<BigInt>::zeros(dim, n);
            for h in 0..n {
                for i in 0..prev_rank {
                    for k in 0..n {
                        orbit[(i * n + g.mul(h, k), h)] = v[i * n + k].clone();
                    }
                }
            }
            span = span.sum(&Lattice::from_columns(&orbit));
            gens.push(v);
        }
        if span.rank() != kernel.cols() {
            return Err(Error::Internal("chosen generators do not span the kernel".into()));
        }
        let mut d = ZgMatrix { rows: prev_rank, columns: Vec::new() };
        for v in &gens {
            let entries = (0..dim)
                .filter(|&t| !v[t].is_zero())
                .map(|t| v[t].to_i64().map(|c| (t / n, t % n, c)))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Internal("kernel vector overflows i64".into()))?;
            d.push(entries);
        }
        let integral = d.to_integral(&group).to_dense();
        kernel = kernel_basis(&integral);
        let bound = BigInt::from(1 << 12);
        if kernel.entries().iter().any(|x| x.abs() > bound) {
            kernel = lll_reduce(&kernel);
        }
        ranks.push(gens.len());
        differentials.push(d);
    }
    let res = Resolution { kind: ResolutionKind::Reduced, group, ranks, differentials };
    res.check_composites()?;
    res.check_exact(n_max, usize::MAX)?;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn cyclic(m: usize) -> GroupRef {
        Arc::new(PresentedGroup::cyclic(m, &Caps::default()).unwrap())
    }

    #[test]
    fn bar_ranks() {
        let c2 = cyclic(2);
        let res = bar_resolution(c2, 3, &Caps::default()).unwrap();
        assert_eq!(res.ranks, vec![1, 1, 1, 1]);
        res.check_exact(3, usize::MAX).unwrap();
        let c3 = cyclic(3);
        let res = bar_resolution(c3, 3, &Caps::default()).unwrap();
        assert_eq!(res.ranks, vec![1, 2, 4, 8]);
        res.check_exact(3, usize::MAX).unwrap();
    }

    #[test]
    fn cyclic_resolutions_are_exact() {
        for m in 2..=5 {
            let g = cyclic(m);
            cyclic_periodic_resolution(g.clone(), 4).unwrap().check_exact(4, usize::MAX).unwrap();
            let gr = gruenberg_resolution_cyclic(g.clone(), 4).unwrap();
            assert_eq!(gr.ranks, vec![1; 5]);
            let red = reduced_resolution(g, 4).unwrap();
            assert!(red.ranks.iter().all(|&r| r >= 1));
        }
    }

    #[test]
    fn gruenberg_matches_periodic_maps() {
        let g = cyclic(3);
        let gr = gruenberg_resolution_cyclic(g.clone(), 3).unwrap();
        let per = cyclic_periodic_resolution(g, 3).unwrap();
        assert_eq!(gr.differentials, per.differentials);
    }
}
