//! Computational tools for the pretorsion theory of groupoids and skeletal
//! categories in `Cat`, restricted to finite inputs.
//!
//! * [`fincat`]: validated finite categories, functors, `Iso(C)` and `Aut(C)`.
//! * [`words`]: the free monoid on arrows, reduced words and their normal forms.
//! * [`coeq`]: coequalizers of discrete-domain functor pairs.
//! * [`pretorsion`]: torsion coreflection, skeletal reflection, Z-kernels and
//!   short Z-exact sequences.
//! * [`presentation`]: finitely presented categories for Z-cokernels.
//! * [`cli`]: the `skelcat` command-line frontend.

pub mod cli;
pub mod coeq;
pub mod corpus;
pub mod dot;
pub mod error;
pub mod fincat;
pub mod presentation;
pub mod pretorsion;
mod unionfind;
pub mod words;

pub use error::{Error, Result};
pub use fincat::{ArrowId, FinCat, Functor, ObjId};

/// Upper bound on the number of search nodes an exhaustive enumeration may
/// visit before giving up with [`Error::BudgetExceeded`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Budget {
    pub const ENV_VAR: &'static str = "SKELCAT_BUDGET";

    /// Default budget, overridden by `SKELCAT_BUDGET` when it parses.
    pub fn from_env() -> Budget {
        std::env::var(Self::ENV_VAR).ok().and_then(|v| v.trim().parse().ok()).map(Budget).unwrap_or_default()
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(5_000_000)
    }
}
