//! The language of fr-codes: parsing, the rule base, translation into group
//! homology and numeric evaluation.

pub mod ast;
pub mod eval;
pub mod modcode;
pub mod rules;
pub mod translate;

pub use ast::{normalize, parse, parse_index, parse_pattern, Bindings, Code, Index};
pub use eval::{
    apply_kuzmin, evaluate, evaluate_query, functor_power, homology_of_expression, kuzmin_poly, module_code_evaluate,
    presentation_coinvariants, EvalOutcome, EvalStatus, Evaluation, RuleOutcome,
};
pub use modcode::{looks_like_module_code, parse_module_code, parse_module_pattern, Functor, ModuleCode};
pub use rules::{rule_base, rule_by_id, Coeff, HomologyExpr, Hypothesis, LimitPattern, Pattern, Ring, RingPattern, Term, TranslationRule};
pub use translate::{module_code_translate, parse_query, translate, translate_query, Query, Translation};
