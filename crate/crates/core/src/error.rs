use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::AbelianInvariants;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relations escape subgroup (witness column {column}: {witness:?})")]
    RelationsEscape { column: usize, witness: Vec<BigInt> },
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("group too large: order exceeds cap {cap}")]
    GroupTooLarge { cap: usize },
    #[error("invalid permutation input: {0}")]
    InvalidPermutation(String),
    #[error("generator x{index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("relator {index} ({relator}) does not evaluate to the identity")]
    RelatorNotKilled { index: usize, relator: String },
    #[error("presentation may not present this group: presentation gives {presentation}, group has {group}")]
    AbelianizationMismatch {
        presentation: AbelianInvariants,
        group: AbelianInvariants,
    },
    #[error("generator images do not generate the group ({reached} of {order} elements reached)")]
    NotGenerating { reached: usize, order: usize },
    #[error("resource cap exceeded: {what} is {value}, cap {cap}")]
    CapExceeded { what: String, value: usize, cap: usize },
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("modules are over different groups")]
    GroupMismatch,
    #[error("action is not a group homomorphism: {0}")]
    NotAModule(String),
    #[error("sequence is not exact: {reason} (witness {witness:?})")]
    NotExact { reason: String, witness: Vec<BigInt> },
    #[error("denominator not contained in numerator at length {level} (witness {witness:?})")]
    NotContained { level: usize, witness: Vec<BigInt> },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("symbolic only: {0}")]
    SymbolicOnly(String),
    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub fn cap(what: impl Into<String>, value: usize, cap: usize) -> Self {
        Error::CapExceeded { what: what.into(), value, cap }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::GroupTooLarge { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
