//! Model-theoretic semantics over canonical domains: single-preference
//! minimal canonical models and enriched models with one preference per
//! aspect.

pub mod domain;
pub mod entail;
pub mod model;
mod solver;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("the knowledge base is inconsistent")]
    InconsistentKb,
    #[error("no interpretation of the individuals satisfies the ABox in the minimal models")]
    AboxUnsatisfiable,
    #[error("minimal models need ranks up to {required}, above the rank bound {bound}")]
    RankBoundExceeded { bound: u32, required: u32 },
    #[error("search space of {required} candidates exceeds the limit of {limit}")]
    SearchSpaceTooLarge { limit: u64, required: u64 },
    #[error("models are over different domains or aspect sets")]
    DomainMismatch,
    #[error("the knowledge base has no model on its canonical domain")]
    NoModel,
}
