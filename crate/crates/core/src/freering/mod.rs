//! The integral free group ring, ideals given by codes, and their truncated
//! quotients.

mod element;
mod ideal;
mod quotient;
mod testmap;

pub use element::{word_count, words_up_to, FreeRingElement};
pub use ideal::{code_span, gamma_generators, IdealSpan};
pub use quotient::{stabilized_quotient, truncated_quotient, QuotientReport};
pub use testmap::{describe, involute, MapEvaluator, TestMap, WordContext};
