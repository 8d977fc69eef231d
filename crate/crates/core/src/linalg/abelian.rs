//! Finitely generated abelian groups in invariant-factor form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_t` with `2 <= d_1 | d_2 | … | d_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "crate::json::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: i64) -> Result<u64> {
    if p > 1 && is_prime(p as u64) {
        Ok(p as u64)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

impl AbelianInvariants {
    pub fn zero() -> Self {
        AbelianInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: i64) -> Self {
        Self::from_cyclic_orders(0, &[BigInt::from(n)])
    }

    /// Builds the canonical form of `Z^free ⊕ ⊕ Z/c_i` from arbitrary orders;
    /// orders 0 count as free summands, orders 1 are dropped.
    pub fn from_cyclic_orders(free: usize, orders: &[BigInt]) -> Self {
        let mut free = free;
        let mut by_prime: BTreeMap<BigInt, Vec<BigInt>> = BTreeMap::new();
        for c in orders {
            if c.is_zero() {
                free += 1;
                continue;
            }
            for (p, e) in factorize(c) {
                by_prime.entry(p.clone()).or_default().push(num_traits::pow(p, e as usize));
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![BigInt::one(); len];
        for powers in by_prime.values_mut() {
            powers.sort();
            let offset = len - powers.len();
            for (i, q) in powers.iter().enumerate() {
                torsion[offset + i] *= q;
            }
        }
        AbelianInvariants { free_rank: free, torsion }
    }

    pub fn from_i64(free: usize, orders: &[i64]) -> Self {
        Self::from_cyclic_orders(free, &orders.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }

    pub fn sum_all<'a>(parts: impl IntoIterator<Item = &'a AbelianInvariants>) -> Self {
        parts.into_iter().fold(Self::zero(), |acc, x| acc.direct_sum(x))
    }

    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(Self::zero(), |acc, _| acc.direct_sum(self))
    }

    pub fn torsion_part(&self) -> Self {
        AbelianInvariants { free_rank: 0, torsion: self.torsion.clone() }
    }

    pub fn p_primary(&self, p: i64) -> Result<Self> {
        let p = BigInt::from(check_prime(p)?);
        let parts: Vec<BigInt> = self
            .torsion
            .iter()
            .map(|d| {
                let mut q = BigInt::one();
                let mut d = d.clone();
                while (&d % &p).is_zero() {
                    d /= &p;
                    q *= &p;
                }
                q
            })
            .collect();
        Ok(Self::from_cyclic_orders(0, &parts))
    }

    /// `A ⊗ Z_(p)` recorded as free part plus `p`-primary torsion.
    pub fn localize(&self, p: i64) -> Result<Self> {
        let t = self.p_primary(p)?;
        Ok(AbelianInvariants { free_rank: self.free_rank, torsion: t.torsion })
    }

    /// Keeps only torsion coprime to `n` (inverting `n`).
    pub fn invert(&self, n: i64) -> Self {
        let n = BigInt::from(n);
        let parts: Vec<BigInt> = self
            .torsion
            .iter()
            .map(|d| {
                let mut d = d.clone();
                loop {
                    let g = d.gcd(&n);
                    if g.is_one() {
                        break d;
                    }
                    d /= g;
                }
            })
            .collect();
        Self::from_cyclic_orders(self.free_rank, &parts)
    }

    pub fn rational_rank(&self) -> usize {
        self.free_rank
    }

    /// `A ⊗ Z/q`.
    pub fn tensor_cyclic(&self, q: &BigInt) -> Self {
        let mut orders = vec![q.clone(); self.free_rank];
        orders.extend(self.torsion.iter().map(|d| d.gcd(q)));
        Self::from_cyclic_orders(0, &orders)
    }

    /// `Tor(A, Z/q)`.
    pub fn tor_cyclic(&self, q: &BigInt) -> Self {
        let orders: Vec<BigInt> = self.torsion.iter().map(|d| d.gcd(q)).collect();
        Self::from_cyclic_orders(0, &orders)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let free = self.free_rank * other.free_rank;
        let mut orders = Vec::new();
        for d in &self.torsion {
            orders.extend(std::iter::repeat_n(d.clone(), other.free_rank));
            orders.extend(other.torsion.iter().map(|e| d.gcd(e)));
        }
        for e in &other.torsion {
            orders.extend(std::iter::repeat_n(e.clone(), self.free_rank));
        }
        Self::from_cyclic_orders(free, &orders)
    }

    pub fn tor(&self, other: &Self) -> Self {
        let mut orders = Vec::new();
        for d in &self.torsion {
            orders.extend(other.torsion.iter().map(|e| d.gcd(e)));
        }
        Self::from_cyclic_orders(0, &orders)
    }

    pub fn torsion_i64(&self) -> Vec<i64> {
        self.torsion.iter().map(|d| d.to_i64().expect("invariant factor exceeds i64")).collect()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
