//! Finite permutation groups, free-group words and presentations.

mod finite;
mod presented;
mod word;

pub use finite::{compose, perm_from_cycles, torsionless_order, FiniteGroup, Perm, TorsionHypothesis};
pub use presented::{GroupFile, Presentation, PresentedGroup, SchreierData};
pub use word::{Letter, Word};
