//! Defeasible reasoning for ALC with a typicality operator.
//!
//! The crate provides a parser for a small line-oriented KB format, a tableau
//! for classical ALC, the rational closure of a TBox, and two model-theoretic
//! semantics over canonical domains: minimal canonical models with a single
//! preference, and minimal canonical models with one preference per aspect
//! coupled to a global preference.
//!
//! ```
//! use typika::{parse_axiom, parse_kb, enriched_entails, RationalClosure};
//!
//! let kb = parse_kb(
//!     "Penguin => Bird
//!      T(Bird) => Fly
//!      T(Bird) => HasNiceFeather
//!      T(Penguin) => not Fly",
//! ).unwrap();
//! let q = parse_axiom("T(Penguin) => HasNiceFeather").unwrap();
//! assert!(!RationalClosure::new(&kb).entails(&q));
//! assert!(enriched_entails(&kb, &q, 4).unwrap().entailed);
//! ```

pub mod closure;
pub mod concept;
pub mod interpretation;
pub mod kb;
pub mod parser;
pub mod semantics;
pub mod tableau;

pub use closure::{
    compute_rank_sequence, concept_rank, in_rational_closure, is_exceptional, materialization,
    satisfiable_wrt_kb, Rank, RankedTBox, RationalClosure,
};
pub use concept::{to_nnf, Concept, Name};
pub use interpretation::Interpretation;
pub use kb::{
    aspect_set, subconcept_closure, AspectSet, Assertion, Axiom, Inclusion, KnowledgeBase,
};
pub use parser::{parse_axiom, parse_kb, parse_queries, ParseError};
pub use semantics::domain::{build_canonical_domain, eval_concept, CanonicalDomain, ElementId};
pub use semantics::entail::{
    default_rank_bound, enriched_entails, entails, minimal_canonical_models, single_pref_entails,
    EnrichedSearch, MinimalModels, Semantics, Verdict, Witness,
};
pub use semantics::model::{
    aspect_preferred, check_coupling, globally_preferred, satisfies_kb, AspectMinimalPool,
    CouplingMode, EnrichedModel, RankAssignment, RankFn, SinglePrefModel,
};
pub use semantics::SemanticsError;
pub use tableau::{entails_strict, is_consistent_set, is_satisfiable, SatResult, StrictTBox};
