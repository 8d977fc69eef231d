//! Homology of finite groups with coefficients in lattices with a group action.

mod resolution;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

pub use resolution::{
    bar_resolution, cyclic_periodic_resolution, gruenberg_resolution_cyclic, reduced_resolution, Resolution,
    ResolutionKind, ZgMatrix,
};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::gmodule::{GModule, GroupRef};
use crate::linalg::{check_prime, factorize, sparse_invariants, AbelianInvariants};

/// Coefficient post-processing applied to integral homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    /// `Z/q` with `q` a prime power.
    Mod(u64),
    /// `Z` localized at the prime `p`.
    Local(u64),
    /// Rational rank only.
    Rationals,
}

impl FromStr for Coefficients {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse_num = |t: &str| t.parse::<u64>().map_err(|_| Error::Invalid(format!("bad coefficient {s:?}")));
        match s {
            "Z" => Ok(Coefficients::Integers),
            "Q" => Ok(Coefficients::Rationals),
            _ => {
                if let Some(q) = s.strip_prefix("Zmod:") {
                    let q = parse_num(q)?;
                    let f = factorize(&BigInt::from(q));
                    if q < 2 || f.len() != 1 {
                        return Err(Error::Invalid(format!("Z/{q}: modulus must be a prime power")));
                    }
                    Ok(Coefficients::Mod(q))
                } else if let Some(p) = s.strip_prefix("loc:") {
                    Ok(Coefficients::Local(check_prime(parse_num(p)? as i64)?))
                } else {
                    Err(Error::Invalid(format!("unknown coefficients {s:?} (expected Z, Zmod:q, loc:p or Q)")))
                }
            }
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Mod(q) => write!(f, "Zmod:{q}"),
            Coefficients::Local(p) => write!(f, "loc:{p}"),
            Coefficients::Rationals => write!(f, "Q"),
        }
    }
}

impl Coefficients {
    /// Applies the coefficients to integral homology `h_n` given `h_{n-1}`.
    pub fn apply(&self, h_n: &AbelianInvariants, h_prev: Option<&AbelianInvariants>) -> Result<AbelianInvariants> {
        Ok(match *self {
            Coefficients::Integers => h_n.clone(),
            Coefficients::Mod(q) => {
                let q = BigInt::from(q);
                let tor = h_prev.map(|h| h.tor_cyclic(&q)).unwrap_or_else(AbelianInvariants::zero);
                h_n.tensor_cyclic(&q).direct_sum(&tor)
            }
            Coefficients::Local(p) => h_n.localize(p as i64)?,
            Coefficients::Rationals => AbelianInvariants::free(h_n.rational_rank()),
        })
    }
}

/// Integral homology `H_n(M ⊗_G P)` for a resolution built to degree `n + 1`.
pub fn homology_with_resolution(res: &Resolution, module: &GModule, n: usize, caps: &Caps) -> Result<AbelianInvariants> {
    if !std::sync::Arc::ptr_eq(&res.group, module.group()) && res.group.group() != module.group().group() {
        return Err(Error::GroupMismatch);
    }
    if n + 1 > res.max_degree() {
        return Err(Error::Invalid(format!("resolution built to degree {}, need {}", res.max_degree(), n + 1)));
    }
    let dim = res.ranks[n] * module.rank();
    let rank_out = if n == 0 {
        0
    } else {
        sparse_invariants(&res.differentials[n - 1].tensor_module(module), caps.max_dense_dim)?.0
    };
    let (rank_in, torsion) = sparse_invariants(&res.differentials[n].tensor_module(module), caps.max_dense_dim)?;
    Ok(AbelianInvariants::from_cyclic_orders(dim - rank_out - rank_in, &torsion))
}

/// Builds the resolution of the requested kind up to degree `n_max`.
pub fn resolution(group: GroupRef, kind: ResolutionKind, n_max: usize, caps: &Caps) -> Result<Resolution> {
    match kind {
        ResolutionKind::Bar => bar_resolution(group, n_max, caps),
        ResolutionKind::Periodic => cyclic_periodic_resolution(group, n_max),
        ResolutionKind::Gruenberg => gruenberg_resolution_cyclic(group, n_max),
        ResolutionKind::Reduced => reduced_resolution(group, n_max),
    }
}

/// `H_n(G; M ⊗ coeff)` computed with the reduced resolution.
pub fn group_homology(module: &GModule, n: usize, coeff: Coefficients, caps: &Caps) -> Result<AbelianInvariants> {
    group_homology_with(module, n, coeff, ResolutionKind::Reduced, caps)
}

pub fn group_homology_with(
    module: &GModule,
    n: usize,
    coeff: Coefficients,
    kind: ResolutionKind,
    caps: &Caps,
) -> Result<AbelianInvariants> {
    let res = resolution(module.group().clone(), kind, n + 1, caps)?;
    let h = homology_with_resolution(&res, module, n, caps)?;
    let prev = match (coeff, n) {
        (Coefficients::Mod(_), n) if n > 0 => Some(homology_with_resolution(&res, module, n - 1, caps)?),
        _ => None,
    };
    coeff.apply(&h, prev.as_ref())
}

/// `H_k(G; M)` for `k = 0..=n_max` from one resolution.
pub fn homology_range(module: &GModule, n_max: usize, kind: ResolutionKind, caps: &Caps) -> Result<Vec<AbelianInvariants>> {
    let res = resolution(module.group().clone(), kind, n_max + 1, caps)?;
    (0..=n_max).map(|n| homology_with_resolution(&res, module, n, caps)).collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::PresentedGroup;

    #[test]
    fn cyclic_homology() {
        let caps = Caps::default();
        for m in 2..=4 {
            let g = Arc::new(PresentedGroup::cyclic(m, &caps).unwrap());
            let t = GModule::trivial(g.clone());
            for kind in [ResolutionKind::Reduced, ResolutionKind::Periodic, ResolutionKind::Gruenberg, ResolutionKind::Bar] {
                let hs = homology_range(&t, 3, kind, &caps).unwrap();
                assert_eq!(hs[0], AbelianInvariants::free(1));
                assert_eq!(hs[1], AbelianInvariants::cyclic(m as i64));
                assert_eq!(hs[2], AbelianInvariants::zero());
                assert_eq!(hs[3], AbelianInvariants::cyclic(m as i64));
            }
        }
    }

    #[test]
    fn free_module_is_acyclic() {
        let caps = Caps::default();
        let g = Arc::new(PresentedGroup::cyclic(3, &caps).unwrap());
        let zg = GModule::regular(g).unwrap();
        let hs = homology_range(&zg, 4, ResolutionKind::Reduced, &caps).unwrap();
        assert_eq!(hs[0], AbelianInvariants::free(1));
        assert!(hs[1..].iter().all(AbelianInvariants::is_zero));
    }

    #[test]
    fn coefficient_parsing() {
        assert_eq!("Zmod:4".parse::<Coefficients>().unwrap(), Coefficients::Mod(4));
        assert!("Zmod:6".parse::<Coefficients>().is_err());
        assert!("loc:4".parse::<Coefficients>().is_err());
        assert_eq!("Q".parse::<Coefficients>().unwrap().to_string(), "Q");
    }

    #[test]
    fn mod_coefficients() {
        let caps = Caps::default();
        let g = Arc::new(PresentedGroup::cyclic(2, &caps).unwrap());
        let t = GModule::trivial(g);
        for n in 0..5 {
            let h = group_homology(&t, n, Coefficients::Mod(2), &caps).unwrap();
            assert_eq!(h, AbelianInvariants::cyclic(2));
        }
        let h = group_homology(&t, 3, Coefficients::Mod(3), &caps).unwrap();
        assert!(h.is_zero());
    }
}
