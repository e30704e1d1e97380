use thiserror::Error;

use crate::fincat::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid category:\n{0}")]
    Invalid(#[from] ValidationReport),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("`{first}` then `{then}` is not composable: cod({first}) = {cod} but dom({then}) = {dom}")]
    NotComposable { first: String, then: String, cod: String, dom: String },

    #[error("quotient arrows are not composable: target class {tgt} differs from source class {src}")]
    ClassMismatch { tgt: String, src: String },

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("enumeration budget of {budget} exceeded while {what}")]
    BudgetExceeded { budget: usize, what: String },

    #[error("wide subcategory not closed under composition: {first} then {then} = {result} is missing")]
    NotClosed { first: String, then: String, result: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconsistency detected: {0}")]
    Inconsistency(String),

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
