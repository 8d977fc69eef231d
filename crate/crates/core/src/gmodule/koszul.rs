//! Koszul complexes attached to a short exact sequence `A ↪ B ↠ C`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::functors::{ext_matrix, multisets, sort_sign, subsets, sym_matrix, tuple_index, tuples};
use super::GModule;
use crate::error::{Error, Result};
use crate::linalg::{cokernel, kernel_basis, subquotient, Lattice, Matrix};
use crate::{IntMatrix, SmallMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KoszulVariant {
    /// `Ex^n A → Ex^{n-1} A ⊗ B → … → S^n B → S^n C`
    ExSym,
    /// `Γ^n A → Γ^{n-1} A ⊗ Ex^1 B → … → Ex^n B → Ex^n C`
    DivEx,
}

/// Terms and differentials; `maps[i]: terms[i] -> terms[i + 1]`.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub variant: KoszulVariant,
    pub terms: Vec<GModule>,
    pub maps: Vec<SmallMatrix>,
}

fn not_exact(reason: impl Into<String>, witness: Vec<BigInt>) -> Error {
    Error::NotExact { reason: reason.into(), witness }
}

/// Checks that `incl: A -> B`, `proj: B -> C` is short exact over `Z` and
/// equivariant.
fn check_sequence(incl: &SmallMatrix, b: &GModule, c: &GModule, proj: &SmallMatrix) -> Result<()> {
    if incl.rows() != b.rank() || proj.cols() != b.rank() || proj.rows() != c.rank() {
        return Err(Error::Invalid("map shapes do not match the modules".into()));
    }
    let comp = &proj.to_big() * &incl.to_big();
    if let Some(j) = (0..comp.cols()).find(|&j| comp.column(j).iter().any(|x| !x.is_zero())) {
        return Err(not_exact("proj ∘ incl is not zero", incl.column(j).iter().map(|&x| x.into()).collect()));
    }
    let ker = Lattice::from_columns(&kernel_basis(proj));
    let img = Lattice::from_columns(incl);
    if img.rank() != incl.cols() {
        let k = kernel_basis(incl);
        return Err(not_exact("incl is not injective", k.column(0)));
    }
    for v in ker.basis_columns().columns() {
        if !img.contains(&v) {
            return Err(not_exact("kernel of proj exceeds image of incl", v));
        }
    }
    if !cokernel(proj).is_zero() {
        return Err(not_exact("proj is not surjective", Vec::new()));
    }
    for i in 0..b.group().generator_count() {
        let lhs = &proj.to_big() * &b.generator_action(i).to_big();
        let rhs = &c.generator_action(i).to_big() * &proj.to_big();
        if lhs != rhs {
            return Err(Error::NotAModule(format!("proj does not commute with x{}", i + 1)));
        }
    }
    Ok(())
}

/// Orbit sums of index tuples under position permutations: a basis of the
/// symmetric tensors indexed by multisets.
pub(super) fn orbit_sum_basis(r: usize, n: usize) -> SmallMatrix {
    let ms = multisets(r, n);
    let index: HashMap<Vec<usize>, usize> = ms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut out = Matrix::zeros(r.pow(n as u32), ms.len());
    for t in tuples(r, n) {
        let mut s = t.clone();
        s.sort_unstable();
        out[(tuple_index(r, &t), index[&s])] = 1;
    }
    out
}

fn ex_sym_differential(incl: &SmallMatrix, k: usize, j: usize) -> SmallMatrix {
    let (ra, rb) = (incl.cols(), incl.rows());
    let src_a = subsets(ra, k);
    let src_b = multisets(rb, j);
    let dst_a = subsets(ra, k - 1);
    let dst_b = multisets(rb, j + 1);
    let ia: HashMap<&Vec<usize>, usize> = dst_a.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let ib: HashMap<&Vec<usize>, usize> = dst_b.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut d = Matrix::zeros(dst_a.len() * dst_b.len(), src_a.len() * src_b.len());
    for (si, s) in src_a.iter().enumerate() {
        for (sj, m) in src_b.iter().enumerate() {
            let col = si * src_b.len() + sj;
            for l in 0..k {
                let sign = if l % 2 == 0 { 1 } else { -1 };
                let mut rest = s.clone();
                let a = rest.remove(l);
                for bidx in 0..rb {
                    let coef = incl[(bidx, a)];
                    if coef == 0 {
                        continue;
                    }
                    let mut mono = m.clone();
                    let pos = mono.partition_point(|&x| x <= bidx);
                    mono.insert(pos, bidx);
                    d[(ia[&rest] * dst_b.len() + ib[&mono], col)] += sign * coef;
                }
            }
        }
    }
    d
}

fn div_ex_differential(incl: &SmallMatrix, k: usize, j: usize) -> SmallMatrix {
    let (ra, rb) = (incl.cols(), incl.rows());
    let src_a = multisets(ra, k);
    let src_b = subsets(rb, j);
    let dst_a = multisets(ra, k - 1);
    let dst_b = subsets(rb, j + 1);
    let ia: HashMap<&Vec<usize>, usize> = dst_a.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let ib: HashMap<&Vec<usize>, usize> = dst_b.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut d = Matrix::zeros(dst_a.len() * dst_b.len(), src_a.len() * src_b.len());
    for (si, m) in src_a.iter().enumerate() {
        for (sj, wedge) in src_b.iter().enumerate() {
            let col = si * src_b.len() + sj;
            let mut distinct = m.clone();
            distinct.dedup();
            for &a in &distinct {
                let mut rest = m.clone();
                let pos = rest.iter().position(|&x| x == a).unwrap();
                rest.remove(pos);
                for bidx in 0..rb {
                    let coef = incl[(bidx, a)];
                    if coef == 0 {
                        continue;
                    }
                    let mut t = vec![bidx];
                    t.extend_from_slice(wedge);
                    let (sign, sorted) = sort_sign(&t);
                    if sign == 0 {
                        continue;
                    }
                    d[(ia[&rest] * dst_b.len() + ib[&sorted], col)] += sign * coef;
                }
            }
        }
    }
    d
}

/// Builds the degree-`n` Koszul complex of `A ↪ B ↠ C`, where `A` is the
/// image of `incl`. The input sequence is checked first.
pub fn koszul_complex(
    incl: &IntMatrix,
    b: &GModule,
    c: &GModule,
    proj: &IntMatrix,
    n: usize,
    variant: KoszulVariant,
) -> Result<KoszulComplex> {
    let small = |m: &IntMatrix| m.to_i64().ok_or_else(|| Error::Invalid("map entries exceed i64".into()));
    let (incl, proj) = (small(incl)?, small(proj)?);
    check_sequence(&incl, b, c, &proj)?;
    let a = b.submodule(&incl.to_big())?;
    let mut terms = Vec::with_capacity(n + 2);
    let mut maps = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let k = n - j;
        let term = match variant {
            KoszulVariant::ExSym => a.ext_power(k)?.tensor(&b.sym_power(j)?)?,
            KoszulVariant::DivEx => {
                let div = a.tensor_power(k)?.submodule(&orbit_sum_basis(a.rank(), k).to_big())?;
                div.tensor(&b.ext_power(j)?)?
            }
        };
        terms.push(term);
        if k > 0 {
            maps.push(match variant {
                KoszulVariant::ExSym => ex_sym_differential(&incl, k, j),
                KoszulVariant::DivEx => div_ex_differential(&incl, k, j),
            });
        }
    }
    match variant {
        KoszulVariant::ExSym => {
            terms.push(c.sym_power(n)?);
            maps.push(sym_matrix(&proj, n));
        }
        KoszulVariant::DivEx => {
            terms.push(c.ext_power(n)?);
            maps.push(ext_matrix(&proj, n));
        }
    }
    Ok(KoszulComplex { variant, terms, maps })
}

impl KoszulComplex {
    /// Injective at the left end, surjective at the right end, exact in
    /// between, with equivariant differentials.
    pub fn check_exact(&self) -> Result<()> {
        for (i, d) in self.maps.iter().enumerate() {
            let (src, dst) = (&self.terms[i], &self.terms[i + 1]);
            for g in 0..src.group().generator_count() {
                let d = d.to_big();
                if &d * &src.generator_action(g).to_big() != &dst.generator_action(g).to_big() * &d {
                    return Err(Error::NotAModule(format!("differential {i} does not commute with x{}", g + 1)));
                }
            }
        }
        for i in 0..self.maps.len().saturating_sub(1) {
            let dd = &self.maps[i + 1].to_big() * &self.maps[i].to_big();
            if let Some(j) = (0..dd.cols()).find(|&j| dd.column(j).iter().any(|x| !x.is_zero())) {
                let mut w = vec![BigInt::zero(); dd.cols()];
                w[j] = 1.into();
                return Err(not_exact(format!("d{} ∘ d{} is not zero", i + 1, i), w));
            }
        }
        let first = &self.maps[0];
        let k0 = kernel_basis(first);
        if k0.cols() > 0 {
            return Err(not_exact("first map is not injective", k0.column(0)));
        }
        for t in 1..self.maps.len() {
            let ker = kernel_basis(&self.maps[t]);
            let img = self.maps[t - 1].to_big();
            let dim = self.terms[t].rank();
            let h = subquotient(dim, &ker, &img)?;
            if !h.is_zero() {
                let lat = Lattice::from_columns(&img);
                let w = ker.columns().into_iter().find(|v| !lat.contains(v)).unwrap_or_default();
                return Err(not_exact(format!("homology {h} at term {t}"), w));
            }
        }
        let last = self.maps.last().unwrap();
        if !cokernel(last).is_zero() {
            return Err(not_exact("last map is not surjective", Vec::new()));
        }
        Ok(())
    }
}
