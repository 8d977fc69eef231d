use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{is_prime, AbelianInvariants};

/// A permutation of `0..degree`, stored as its image list.
pub type Perm = Vec<u32>;

/// Builds a permutation from 1-based cycles.
pub fn perm_from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
    let mut p: Perm = (0..degree as u32).collect();
    let mut seen = vec![false; degree];
    for cyc in cycles {
        for &x in cyc {
            if x == 0 || x > degree {
                return Err(Error::InvalidPermutation(format!("point {x} outside 1..={degree}")));
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::InvalidPermutation(format!("point {x} repeated across cycles")));
            }
        }
        for (i, &x) in cyc.iter().enumerate() {
            let y = cyc[(i + 1) % cyc.len()];
            p[x - 1] = (y - 1) as u32;
        }
    }
    Ok(p)
}

pub fn validate_perm(p: &[u32]) -> Result<()> {
    let mut seen = vec![false; p.len()];
    for &x in p {
        let x = x as usize;
        if x >= p.len() || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a bijection")));
        }
    }
    Ok(())
}

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// A finite group with a full multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    elements: Vec<Perm>,
    table: Vec<u32>,
    inverses: Vec<u32>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Closes the generators under multiplication (breadth first, generator
    /// order breaks ties) and tabulates the product.
    pub fn enumerate(perm_gens: &[Perm], degree: usize, cap: usize) -> Result<Self> {
        for g in perm_gens {
            if g.len() != degree {
                return Err(Error::InvalidPermutation(format!("{g:?} has degree {} not {degree}", g.len())));
            }
            validate_perm(g)?;
        }
        let id: Perm = (0..degree as u32).collect();
        let mut index: HashMap<Perm, usize> = HashMap::new();
        let mut elements = vec![id.clone()];
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in perm_gens {
                let p = compose(&elements[e], g);
                if !index.contains_key(&p) {
                    if elements.len() == cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&compose(&elements[a], &elements[b])] as u32;
            }
        }
        let inverses = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("group element without inverse") as u32)
            .collect();
        let generators = perm_gens.iter().map(|g| index[g]).collect();
        let g = FiniteGroup { elements, table, inverses, generators };
        g.spot_check();
        Ok(g)
    }

    fn spot_check(&self) {
        let n = self.order();
        for a in 0..n {
            assert_eq!(self.mul(0, a), a);
            assert_eq!(self.mul(a, 0), a);
        }
        // Deterministic sample of triples; associativity holds for
        // permutation composition, so this only guards the table.
        let step = (n / 7).max(1);
        for a in (0..n).step_by(step) {
            for b in (0..n).step_by(step) {
                for c in (0..n).step_by(step) {
                    assert_eq!(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)));
                }
            }
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn element(&self, a: usize) -> &Perm {
        &self.elements[a]
    }

    /// Indices of the permutation generators used to build the group.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a membership mask.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for &g in gens {
                let p = self.mul(e, g);
                if !mask[p] {
                    mask[p] = true;
                    queue.push_back(p);
                }
            }
        }
        mask
    }

    /// Invariants of `G / [G, G]`, computed from the permutation group alone.
    pub fn abelianization(&self) -> AbelianInvariants {
        let n = self.order();
        let mut comms: Vec<usize> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                comms.push(c);
            }
        }
        comms.sort_unstable();
        comms.dedup();
        let d = self.subgroup(&comms);
        let dsize = d.iter().filter(|&&x| x).count();
        let q = n / dsize;
        let in_d = |g: usize| d[g];
        let mut orders: Vec<BigInt> = Vec::new();
        for p in 2..=q as u64 {
            if !is_prime(p) || q as u64 % p != 0 {
                continue;
            }
            // count[j] = #{cosets gD : g^(p^j) ∈ D}
            let mut counts = vec![1usize];
            let mut pj = 1u64;
            loop {
                pj *= p;
                let c = (0..n).filter(|&g| in_d(self.pow(g, pj))).count() / dsize;
                counts.push(c);
                if c == *counts.iter().rev().nth(1).unwrap() || pj > q as u64 {
                    break;
                }
            }
            // r_j = log_p(counts[j] / counts[j-1]) = # factors of order >= p^j.
            let mut ranks = Vec::new();
            for j in 1..counts.len() {
                let mut ratio = counts[j] / counts[j - 1];
                let mut r = 0;
                while ratio > 1 {
                    ratio /= p as usize;
                    r += 1;
                }
                ranks.push(r);
            }
            for j in 0..ranks.len() {
                let next = ranks.get(j + 1).copied().unwrap_or(0);
                for _ in 0..ranks[j] - next {
                    orders.push(BigInt::from(p).pow(j as u32 + 1));
                }
            }
        }
        AbelianInvariants::from_cyclic_orders(0, &orders)
    }

    pub fn torsionless(&self, h: TorsionHypothesis) -> bool {
        torsionless_order(self.order() as u64, h)
    }

    /// Product in the group ring, elements as coefficient vectors.
    pub fn ring_mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = self.order();
        let mut out = vec![0i64; n];
        for (g, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (h, &y) in b.iter().enumerate() {
                if y != 0 {
                    out[self.mul(g, h)] += x * y;
                }
            }
        }
        out
    }

    pub fn ring_basis(&self, g: usize) -> Vec<i64> {
        let mut v = vec![0; self.order()];
        v[g] = 1;
        v
    }
}

/// Absence of torsion of a given kind, for finite groups decided by the order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum TorsionHypothesis {
    /// No element of order `p`.
    Prime(u64),
    /// No `p`-torsion for any prime `p <= n`.
    Factorial(u64),
    /// No nontrivial solution of `x^n = 1`.
    Order(u64),
    /// Torsion-free.
    All,
}

pub fn torsionless_order(order: u64, h: TorsionHypothesis) -> bool {
    let gcd = |a: u64, b: u64| num_integer::Integer::gcd(&a, &b);
    match h {
        TorsionHypothesis::Prime(p) => order % p != 0,
        TorsionHypothesis::Factorial(n) => (2..=n).filter(|&p| is_prime(p)).all(|p| order % p != 0),
        TorsionHypothesis::Order(n) => gcd(n, order) == 1,
        TorsionHypothesis::All => order == 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, gens: &[&[&[usize]]]) -> FiniteGroup {
        let perms: Vec<Perm> = gens
            .iter()
            .map(|cycles| perm_from_cycles(degree, &cycles.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap())
            .collect();
        FiniteGroup::enumerate(&perms, degree, 512).unwrap()
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(group(2, &[&[&[1, 2]]]).order(), 2);
        let v4 = group(4, &[&[&[1, 2]], &[&[3, 4]]]);
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
        let s3 = group(3, &[&[&[1, 2, 3]], &[&[1, 2]]]);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.abelianization(), AbelianInvariants::cyclic(2));
    }

    #[test]
    fn cap_is_enforced() {
        let perms = vec![perm_from_cycles(5, &[vec![1, 2, 3, 4, 5]]).unwrap(), perm_from_cycles(5, &[vec![1, 2]]).unwrap()];
        assert!(matches!(FiniteGroup::enumerate(&perms, 5, 100), Err(Error::GroupTooLarge { cap: 100 })));
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(perm_from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(perm_from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(FiniteGroup::enumerate(&[vec![0, 0]], 2, 10).is_err());
    }

    #[test]
    fn abelianization_of_abelian_groups() {
        let c2c4 = group(6, &[&[&[1, 2]], &[&[3, 4, 5, 6]]]);
        assert_eq!(c2c4.abelianization(), AbelianInvariants::from_i64(0, &[2, 4]));
        let c6 = group(5, &[&[&[1, 2], &[3, 4, 5]]]);
        assert_eq!(c6.abelianization(), AbelianInvariants::cyclic(6));
    }

    #[test]
    fn torsionless_examples() {
        assert!(torsionless_order(3, TorsionHypothesis::Prime(2)));
        assert!(!torsionless_order(4, TorsionHypothesis::Prime(2)));
        assert!(!torsionless_order(6, TorsionHypothesis::Factorial(3)));
        assert!(torsionless_order(35, TorsionHypothesis::Factorial(3)));
    }
}
