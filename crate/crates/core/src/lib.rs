//! Exact computations around fr-codes over free group rings: integer
//! linear algebra, finite groups with presentations, modules over integral
//! group rings, group homology, relation modules, truncated ideal quotients
//! and the code language with its translation rules.

pub mod config;
pub mod error;
pub mod gmodule;
pub mod freering;
pub mod frlang;
pub mod group;
pub mod homology;
pub mod json;
pub mod linalg;
pub mod relmod;
pub mod scalar;

pub use config::Caps;
pub use error::{Error, Result};
pub use group::{FiniteGroup, Presentation, PresentedGroup, Word};
pub use gmodule::GModule;
pub use linalg::{AbelianInvariants, Lattice};

/// Arbitrary-precision integer matrix, the default entry type.
pub type IntMatrix = linalg::Matrix<num_bigint::BigInt>;
/// Machine-integer matrix used for group actions.
pub type SmallMatrix = linalg::Matrix<i64>;
