//! Query answering under rational closure, single-preference minimal
//! canonical models, and minimal canonical enriched models.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::closure::RationalClosure;
use crate::kb::{Axiom, KnowledgeBase};
use crate::semantics::domain::{build_canonical_domain_with, query_concepts, CanonicalDomain};
use crate::semantics::model::{
    abox_mapping, check_coupling_with, satisfies_kb, AspectMinimalPool, CouplingMode,
    EnrichedModel, RankAssignment, RankFn, SinglePrefModel,
};
use crate::semantics::solver::{self, Frame};
use crate::semantics::SemanticsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    RationalClosure,
    SinglePreference,
    Enriched,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [
        Semantics::RationalClosure,
        Semantics::SinglePreference,
        Semantics::Enriched,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::RationalClosure => "rc",
            Semantics::SinglePreference => "single-pref",
            Semantics::Enriched => "enriched",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown semantics `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Single(SinglePrefModel),
    Enriched(EnrichedModel),
}

impl Witness {
    pub fn domain(&self) -> &CanonicalDomain {
        match self {
            Witness::Single(m) => &m.domain,
            Witness::Enriched(m) => &m.domain,
        }
    }

    pub fn global(&self) -> &RankFn {
        match self {
            Witness::Single(m) => &m.global,
            Witness::Enriched(m) => &m.ranks.global,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub semantics: Semantics,
    pub entailed: bool,
    /// A countermodel when not entailed; for model-based semantics, some
    /// minimal model when entailed.
    pub witness: Option<Witness>,
}

/// Number of defeasible axioms plus one.
pub fn default_rank_bound(kb: &KnowledgeBase) -> u32 {
    kb.defeasible.len() as u32 + 1
}

/// Default cap on the number of candidates a search may visit.
pub const DEFAULT_SEARCH_LIMIT: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnrichedSearch {
    pub rank_bound: u32,
    pub coupling: CouplingMode,
    pub search_limit: u64,
}

impl EnrichedSearch {
    pub fn new(rank_bound: u32) -> Self {
        EnrichedSearch {
            rank_bound,
            coupling: CouplingMode::Literal,
            search_limit: DEFAULT_SEARCH_LIMIT,
        }
    }
}

/// Whether the query holds in the model given by `global` on `domain`.
pub fn holds_in(domain: &CanonicalDomain, global: &RankFn, query: &Axiom) -> bool {
    let i = query.inclusion();
    let rhs = domain.mask(&i.rhs);
    match query {
        Axiom::Strict(_) => domain.mask(&i.lhs).iter().zip(&rhs).all(|(l, r)| !l || *r),
        Axiom::Defeasible(_) => global
            .minimal(&domain.mask(&i.lhs))
            .into_iter()
            .all(|x| rhs[x]),
    }
}

/// The canonical domain for a query, or an error for an inconsistent KB.
pub fn query_domain(
    kb: &KnowledgeBase,
    closure: &RationalClosure,
    query: &Axiom,
) -> Result<Arc<CanonicalDomain>, SemanticsError> {
    build_canonical_domain_with(kb, closure, query_concepts(query)).map(Arc::new)
}

/// The minimal canonical enriched models on a domain.
#[derive(Clone, Debug)]
pub struct MinimalModels {
    pub pool: AspectMinimalPool,
    /// Ordered lexicographically by global rank vector.
    pub models: Vec<EnrichedModel>,
}

impl MinimalModels {
    /// The first minimal model in which the query fails.
    pub fn countermodel(&self, query: &Axiom) -> Option<&EnrichedModel> {
        self.models
            .iter()
            .find(|m| !holds_in(&m.domain, &m.ranks.global, query))
    }

    pub fn entails(&self, query: &Axiom) -> bool {
        self.countermodel(query).is_none()
    }

    /// Minimality read without requiring aspect-minimality of the model
    /// itself: `m` is a model of the KB and no aspect-minimal model has
    /// pointwise lower global ranks with a strict drop. The aspect-minimal
    /// models among these are exactly `self.models`.
    pub fn is_literally_minimal(&self, m: &EnrichedModel) -> bool {
        let kb = &self.pool.kb;
        satisfies_kb(m, kb)
            && check_coupling_with(m, kb, CouplingMode::Literal)
            && !self
                .models
                .iter()
                .any(|p| p.ranks.global.strictly_below(&m.ranks.global))
    }
}

fn class_cap(frame: &Frame) -> u32 {
    frame.classes.saturating_sub(1) as u32
}

fn check_bound<'a>(
    bound: u32,
    ranks: impl IntoIterator<Item = &'a Vec<u32>>,
) -> Result<(), SemanticsError> {
    let required = ranks
        .into_iter()
        .flat_map(|g| g.iter().copied())
        .max()
        .unwrap_or(0);
    if required > bound {
        Err(SemanticsError::RankBoundExceeded { bound, required })
    } else {
        Ok(())
    }
}

/// Minimal canonical enriched models of `kb` on `domain`.
///
/// Minimal models in which the global ranks skip a value can be compressed,
/// so every minimal model has ranks below the number of profile classes; the
/// search runs up to that cap and reports models beyond `rank_bound` as an
/// overflow.
pub fn minimal_models_on(
    kb: &KnowledgeBase,
    domain: Arc<CanonicalDomain>,
    search: &EnrichedSearch,
) -> Result<MinimalModels, SemanticsError> {
    let pool = AspectMinimalPool::new(kb, domain.clone());
    let frame = Frame::new(&domain, kb, &[]);
    let cap = class_cap(&frame);
    let ranks = match search.coupling {
        CouplingMode::Literal => solver::enriched_minimal(&frame, cap, search.search_limit)?,
        CouplingMode::Biconditional => biconditional_minimal(kb, &pool, &frame, cap, search)?,
    };
    if ranks.is_empty() {
        return Err(SemanticsError::NoModel);
    }
    check_bound(search.rank_bound, &ranks)?;
    let mut models: Vec<EnrichedModel> = ranks
        .iter()
        .map(|g| pool.model(frame.expand(g)))
        .filter(|m| kb.abox.is_empty() || abox_mapping(&domain, kb, &m.ranks.global).is_some())
        .collect();
    if models.is_empty() {
        return Err(SemanticsError::AboxUnsatisfiable);
    }
    models.sort_by(|a, b| a.ranks.global.cmp(&b.ranks.global));
    Ok(MinimalModels { pool, models })
}

fn biconditional_minimal(
    kb: &KnowledgeBase,
    pool: &AspectMinimalPool,
    frame: &Frame,
    cap: u32,
    search: &EnrichedSearch,
) -> Result<Vec<Vec<u32>>, SemanticsError> {
    let mut found: Vec<Vec<u32>> = Vec::new();
    solver::all_rank_vectors(frame, cap, search.search_limit, |g| {
        let m = pool.model(frame.expand(g));
        let kb_tbox = KnowledgeBase {
            abox: Vec::new(),
            ..kb.clone()
        };
        if satisfies_kb(&m, &kb_tbox) && check_coupling_with(&m, kb, CouplingMode::Biconditional) {
            found.push(g.to_vec());
        }
    })?;
    Ok(found
        .iter()
        .filter(|g| {
            !found
                .iter()
                .any(|h| h != *g && h.iter().zip(g.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect())
}

pub fn minimal_canonical_models(
    kb: &KnowledgeBase,
    query: &Axiom,
    rank_bound: u32,
) -> Result<MinimalModels, SemanticsError> {
    let closure = RationalClosure::new(kb);
    let domain = query_domain(kb, &closure, query)?;
    minimal_models_on(kb, domain, &EnrichedSearch::new(rank_bound))
}

pub fn enriched_entails(
    kb: &KnowledgeBase,
    query: &Axiom,
    rank_bound: u32,
) -> Result<Verdict, SemanticsError> {
    let models = minimal_canonical_models(kb, query, rank_bound)?;
    Ok(enriched_verdict(&models, query))
}

pub fn enriched_verdict(models: &MinimalModels, query: &Axiom) -> Verdict {
    let counter = models.countermodel(query);
    Verdict {
        semantics: Semantics::Enriched,
        entailed: counter.is_none(),
        witness: counter
            .or(models.models.first())
            .cloned()
            .map(Witness::Enriched),
    }
}

/// The minimal canonical model under a single preference: the least ranks
/// satisfying every defeasible axiom.
pub fn single_pref_minimal_model(
    kb: &KnowledgeBase,
    domain: Arc<CanonicalDomain>,
    rank_bound: u32,
) -> Result<SinglePrefModel, SemanticsError> {
    let frame = Frame::new(&domain, kb, &[]);
    let g = solver::single_least(&frame, class_cap(&frame)).ok_or(SemanticsError::NoModel)?;
    check_bound(rank_bound, [&g])?;
    let global = frame.expand(&g);
    if !kb.abox.is_empty() && abox_mapping(&domain, kb, &global).is_none() {
        return Err(SemanticsError::AboxUnsatisfiable);
    }
    Ok(SinglePrefModel { domain, global })
}

pub fn single_pref_entails(
    kb: &KnowledgeBase,
    query: &Axiom,
    rank_bound: u32,
) -> Result<Verdict, SemanticsError> {
    let closure = RationalClosure::new(kb);
    let domain = query_domain(kb, &closure, query)?;
    let model = single_pref_minimal_model(kb, domain, rank_bound)?;
    Ok(single_pref_verdict(model, query))
}

pub fn single_pref_verdict(model: SinglePrefModel, query: &Axiom) -> Verdict {
    Verdict {
        semantics: Semantics::SinglePreference,
        entailed: holds_in(&model.domain, &model.global, query),
        witness: Some(Witness::Single(model)),
    }
}

pub fn rc_verdict(closure: &RationalClosure, query: &Axiom) -> Verdict {
    Verdict {
        semantics: Semantics::RationalClosure,
        entailed: closure.entails(query),
        witness: None,
    }
}

/// Answers a query under the named semantics.
pub fn entails(
    kb: &KnowledgeBase,
    query: &Axiom,
    semantics: Semantics,
    rank_bound: u32,
) -> Result<Verdict, SemanticsError> {
    match semantics {
        Semantics::RationalClosure => {
            let closure = RationalClosure::new(kb);
            if !closure.is_satisfiable(std::iter::empty()) {
                return Err(SemanticsError::InconsistentKb);
            }
            Ok(rc_verdict(&closure, query))
        }
        Semantics::SinglePreference => single_pref_entails(kb, query, rank_bound),
        Semantics::Enriched => enriched_entails(kb, query, rank_bound),
    }
}

/// A single-preference model of the TBox on `domain`, with ranks at most
/// `rank_bound`, in which the query fails. `domain` must be built over the
/// query's concepts. The ABox is not taken into account.
pub fn single_pref_countermodel(
    kb: &KnowledgeBase,
    domain: &Arc<CanonicalDomain>,
    query: &Axiom,
    rank_bound: u32,
) -> Option<SinglePrefModel> {
    let [lhs, rhs] = query_concepts(query);
    let frame = Frame::new(domain, kb, &[lhs, rhs]);
    let g = match query {
        Axiom::Strict(_) => {
            let any_model = solver::single_least(&frame, rank_bound)?;
            violates_strict(&frame).then_some(any_model)?
        }
        Axiom::Defeasible(_) => solver::single_countermodel(&frame, rank_bound)?,
    };
    Some(SinglePrefModel {
        domain: domain.clone(),
        global: frame.expand(&g),
    })
}

/// As [`single_pref_countermodel`], over enriched models. The countermodel
/// uses its global ranks for every aspect.
pub fn enriched_countermodel(
    kb: &KnowledgeBase,
    domain: &Arc<CanonicalDomain>,
    query: &Axiom,
    rank_bound: u32,
    search_limit: u64,
) -> Result<Option<EnrichedModel>, SemanticsError> {
    let [lhs, rhs] = query_concepts(query);
    let frame = Frame::new(domain, kb, &[lhs, rhs]);
    let g = match query {
        Axiom::Strict(_) => {
            if !violates_strict(&frame) {
                return Ok(None);
            }
            // any enriched model will do; the least aspect-minimal one exists
            // whenever some model does
            let cap = rank_bound.min(class_cap(&frame));
            solver::enriched_minimal(&frame, cap, search_limit)?
                .into_iter()
                .next()
        }
        Axiom::Defeasible(_) => solver::enriched_countermodel(&frame, rank_bound, search_limit)?,
    };
    Ok(g.map(|g| {
        let global = frame.expand(&g);
        let aspects = crate::kb::aspect_set(kb);
        EnrichedModel {
            domain: domain.clone(),
            ranks: RankAssignment {
                per_aspect: aspects
                    .iter()
                    .map(|a| (a.clone(), global.clone()))
                    .collect(),
                global,
            },
            aspects,
        }
    }))
}

fn violates_strict(frame: &Frame) -> bool {
    (0..frame.classes).any(|c| frame.extra[0][c] && !frame.extra[1][c])
}
