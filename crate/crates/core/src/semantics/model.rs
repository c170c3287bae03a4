//! Ranked models over a canonical domain and the predicates that classify
//! them: coupling between the global and per-aspect preferences, satisfaction
//! of a KB, and the two preference orders between models.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::closure::Rank;
use crate::concept::{Concept, Name};
use crate::kb::{AspectSet, Assertion, KnowledgeBase};
use crate::semantics::domain::{CanonicalDomain, ElementId};
use crate::semantics::SemanticsError;

/// A rank per domain element. `x` is preferred to `y` iff `k(x) < k(y)`, so
/// the induced relation is irreflexive, transitive, modular and well-founded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankFn(pub Vec<u32>);

impl RankFn {
    pub fn zero(n: usize) -> Self {
        RankFn(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self, x: ElementId) -> u32 {
        self.0[x]
    }

    pub fn precedes(&self, x: ElementId, y: ElementId) -> bool {
        self.0[x] < self.0[y]
    }

    pub fn max_rank(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Rank of a concept: least rank among its instances.
    pub fn concept_rank(&self, mask: &[bool]) -> Rank {
        self.0
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(&r, _)| r)
            .min()
            .map_or(Rank::Infinite, Rank::Finite)
    }

    /// The minimal elements of a set.
    pub fn minimal(&self, mask: &[bool]) -> Vec<ElementId> {
        match self.concept_rank(mask) {
            Rank::Infinite => Vec::new(),
            Rank::Finite(low) => (0..self.0.len())
                .filter(|&x| mask[x] && self.0[x] == low)
                .collect(),
        }
    }

    /// Pointwise `≤` with at least one strict drop.
    pub fn strictly_below(&self, other: &RankFn) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
            && self.0.iter().zip(&other.0).any(|(a, b)| a < b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankAssignment {
    pub per_aspect: BTreeMap<Concept, RankFn>,
    pub global: RankFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedModel {
    pub domain: Arc<CanonicalDomain>,
    pub aspects: AspectSet,
    pub ranks: RankAssignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinglePrefModel {
    pub domain: Arc<CanonicalDomain>,
    pub global: RankFn,
}

impl EnrichedModel {
    /// Every aspect has a rank function and all lengths match the domain.
    pub fn is_well_formed(&self) -> bool {
        let n = self.domain.len();
        self.ranks.global.len() == n
            && self
                .aspects
                .iter()
                .all(|a| self.ranks.per_aspect.get(a).is_some_and(|k| k.len() == n))
            && self
                .ranks
                .per_aspect
                .keys()
                .all(|a| self.aspects.contains(a))
    }

    fn same_frame(&self, other: &EnrichedModel) -> bool {
        (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
            && self.aspects == other.aspects
    }
}

/// How the global preference is tied to the aspect preferences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CouplingMode {
    /// `x < y` whenever condition (a) or (b) holds.
    #[default]
    Literal,
    /// `x < y` exactly when (a) or (b) holds.
    Biconditional,
}

/// Per-axiom membership masks for the defeasible part of a KB.
pub(crate) struct DefeasibleMasks {
    pub antecedent: Vec<Vec<bool>>,
    pub consequent: Vec<Vec<bool>>,
    /// For each element, the indices of the defeasible axioms it violates.
    pub violated: Vec<Vec<usize>>,
}

impl DefeasibleMasks {
    pub fn new(domain: &CanonicalDomain, kb: &KnowledgeBase) -> Self {
        let antecedent: Vec<Vec<bool>> =
            kb.defeasible.iter().map(|i| domain.mask(&i.lhs)).collect();
        let consequent: Vec<Vec<bool>> =
            kb.defeasible.iter().map(|i| domain.mask(&i.rhs)).collect();
        let violated = domain
            .elements()
            .map(|x| {
                (0..kb.defeasible.len())
                    .filter(|&j| antecedent[j][x] && !consequent[j][x])
                    .collect()
            })
            .collect();
        DefeasibleMasks {
            antecedent,
            consequent,
            violated,
        }
    }
}

/// Condition (a): some aspect prefers `x` to `y` and none prefers `y` to `x`.
pub(crate) fn aspect_dominates<'a, I>(aspect_ranks: I, x: ElementId, y: ElementId) -> bool
where
    I: IntoIterator<Item = &'a RankFn>,
{
    let mut some_better = false;
    for k in aspect_ranks {
        if k.precedes(y, x) {
            return false;
        }
        some_better |= k.precedes(x, y);
    }
    some_better
}

/// Condition (b): `y` violates some defeasible axiom, and every axiom `x`
/// violates is outranked by one `y` violates, comparing antecedent ranks.
pub(crate) fn specificity_dominates(
    violated_x: &[usize],
    violated_y: &[usize],
    antecedent_rank: &[Rank],
) -> bool {
    !violated_y.is_empty()
        && violated_x.iter().all(|&j| {
            violated_y
                .iter()
                .any(|&k| antecedent_rank[j] < antecedent_rank[k])
        })
}

pub fn check_coupling(m: &EnrichedModel, kb: &KnowledgeBase) -> bool {
    check_coupling_with(m, kb, CouplingMode::Literal)
}

pub fn check_coupling_with(m: &EnrichedModel, kb: &KnowledgeBase, mode: CouplingMode) -> bool {
    if !m.is_well_formed() {
        return false;
    }
    let masks = DefeasibleMasks::new(&m.domain, kb);
    let global = &m.ranks.global;
    let antecedent_rank: Vec<Rank> = masks
        .antecedent
        .iter()
        .map(|mask| global.concept_rank(mask))
        .collect();
    for x in m.domain.elements() {
        for y in m.domain.elements() {
            if x == y {
                continue;
            }
            let forced = aspect_dominates(m.ranks.per_aspect.values(), x, y)
                || specificity_dominates(&masks.violated[x], &masks.violated[y], &antecedent_rank);
            let below = global.precedes(x, y);
            match mode {
                CouplingMode::Literal if forced && !below => return false,
                CouplingMode::Biconditional if forced != below => return false,
                _ => {}
            }
        }
    }
    true
}

pub(crate) fn strict_axioms_hold(domain: &CanonicalDomain, kb: &KnowledgeBase) -> bool {
    kb.strict.iter().all(|i| {
        let (l, r) = (domain.mask(&i.lhs), domain.mask(&i.rhs));
        l.iter().zip(&r).all(|(a, b)| !a || *b)
    })
}

/// `min_<(C) ⊆ D` for every `T(C) ⊑ D`, under the given preference.
fn typicality_holds<'m>(
    domain: &CanonicalDomain,
    kb: &KnowledgeBase,
    pick: impl Fn(&Concept) -> Option<&'m RankFn>,
) -> bool {
    kb.defeasible.iter().all(|i| {
        let Some(k) = pick(&i.rhs) else {
            return false;
        };
        let rhs = domain.mask(&i.rhs);
        k.minimal(&domain.mask(&i.lhs)).into_iter().all(|x| rhs[x])
    })
}

/// Typicality under the global preference: `min_<(C) ⊆ D`.
pub fn satisfies_global_typicality(m: &EnrichedModel, kb: &KnowledgeBase) -> bool {
    typicality_holds(&m.domain, kb, |_| Some(&m.ranks.global))
}

/// Typicality under the preference of the consequent's aspect: `min_<D(C) ⊆ D`.
pub fn satisfies_aspect_typicality(m: &EnrichedModel, kb: &KnowledgeBase) -> bool {
    typicality_holds(&m.domain, kb, |rhs| m.ranks.per_aspect.get(rhs))
}

pub fn satisfies_kb(m: &EnrichedModel, kb: &KnowledgeBase) -> bool {
    m.is_well_formed()
        && strict_axioms_hold(&m.domain, kb)
        && satisfies_global_typicality(m, kb)
        && satisfies_aspect_typicality(m, kb)
        && abox_mapping(&m.domain, kb, &m.ranks.global).is_some()
}

pub fn single_pref_satisfies_kb(m: &SinglePrefModel, kb: &KnowledgeBase) -> bool {
    m.global.len() == m.domain.len()
        && strict_axioms_hold(&m.domain, kb)
        && typicality_holds(&m.domain, kb, |_| Some(&m.global))
        && abox_mapping(&m.domain, kb, &m.global).is_some()
}

/// Assigns each individual to an element so that all assertions hold;
/// `T(C)(a)` requires `a` to be globally minimal in `C`.
pub fn abox_mapping(
    domain: &CanonicalDomain,
    kb: &KnowledgeBase,
    global: &RankFn,
) -> Option<BTreeMap<Name, ElementId>> {
    let individuals: Vec<Name> = kb.individuals().into_iter().collect();
    let mut candidates: Vec<BTreeSet<ElementId>> = Vec::with_capacity(individuals.len());
    for ind in &individuals {
        let mut ok: BTreeSet<ElementId> = domain.elements().collect();
        for a in &kb.abox {
            if let Assertion::Concept {
                concept,
                individual,
                typical,
            } = a
            {
                if individual != ind {
                    continue;
                }
                let mask = domain.mask(concept);
                let allowed: BTreeSet<ElementId> = if *typical {
                    global.minimal(&mask).into_iter().collect()
                } else {
                    domain.elements().filter(|&x| mask[x]).collect()
                };
                ok = ok.intersection(&allowed).copied().collect();
            }
        }
        candidates.push(ok);
    }
    let mut chosen = Vec::with_capacity(individuals.len());
    if assign(domain, kb, &individuals, &candidates, &mut chosen) {
        Some(individuals.into_iter().zip(chosen).collect())
    } else {
        None
    }
}

fn assign(
    domain: &CanonicalDomain,
    kb: &KnowledgeBase,
    individuals: &[Name],
    candidates: &[BTreeSet<ElementId>],
    chosen: &mut Vec<ElementId>,
) -> bool {
    let i = chosen.len();
    if i == individuals.len() {
        return true;
    }
    for &x in &candidates[i] {
        chosen.push(x);
        let consistent = kb.abox.iter().all(|a| match a {
            Assertion::Role {
                role,
                subject,
                object,
            } => {
                let pos = |n: &Name| individuals[..=i].iter().position(|m| m == n);
                match (pos(subject), pos(object)) {
                    (Some(s), Some(o)) => domain
                        .role_edges
                        .get(role)
                        .is_some_and(|e| e.contains(&(chosen[s], chosen[o]))),
                    _ => true,
                }
            }
            Assertion::Concept { .. } => true,
        });
        if consistent && assign(domain, kb, individuals, candidates, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// `m1` is preferred to `m2` with respect to the single aspects.
pub fn aspect_preferred(m1: &EnrichedModel, m2: &EnrichedModel) -> Result<bool, SemanticsError> {
    if !m1.same_frame(m2) {
        return Err(SemanticsError::DomainMismatch);
    }
    let mut drop = false;
    for (aspect, k1) in &m1.ranks.per_aspect {
        let k2 = m2
            .ranks
            .per_aspect
            .get(aspect)
            .ok_or(SemanticsError::DomainMismatch)?;
        if k1.len() != k2.len() {
            return Err(SemanticsError::DomainMismatch);
        }
        for (a, b) in k1.0.iter().zip(&k2.0) {
            if a > b {
                return Ok(false);
            }
            drop |= a < b;
        }
    }
    Ok(drop)
}

/// The models of a KB on a fixed domain whose aspect ranks cannot be lowered.
///
/// Every aspect preference admits a pointwise least rank function satisfying
/// the KB: rank 1 exactly on the elements that violate some `T(C) ⊑ A` with
/// that aspect as consequent, 0 elsewhere. Whenever some model carries these
/// least aspect ranks, they dominate every other choice, so the pool is the
/// set of models of the KB with exactly these aspect ranks.
#[derive(Clone, Debug)]
pub struct AspectMinimalPool {
    pub kb: KnowledgeBase,
    pub domain: Arc<CanonicalDomain>,
    pub aspects: AspectSet,
    pub aspect_ranks: BTreeMap<Concept, RankFn>,
}

impl AspectMinimalPool {
    pub fn new(kb: &KnowledgeBase, domain: Arc<CanonicalDomain>) -> Self {
        let aspects = crate::kb::aspect_set(kb);
        let aspect_ranks = least_aspect_ranks(kb, &domain, &aspects);
        AspectMinimalPool {
            kb: kb.clone(),
            domain,
            aspects,
            aspect_ranks,
        }
    }

    pub fn contains(&self, m: &EnrichedModel) -> bool {
        (Arc::ptr_eq(&self.domain, &m.domain) || *self.domain == *m.domain)
            && self.aspects == m.aspects
            && m.ranks.per_aspect == self.aspect_ranks
            && satisfies_kb(m, &self.kb)
            && check_coupling(m, &self.kb)
    }

    /// The model with this pool's aspect ranks and the given global ranks.
    pub fn model(&self, global: RankFn) -> EnrichedModel {
        EnrichedModel {
            domain: self.domain.clone(),
            aspects: self.aspects.clone(),
            ranks: RankAssignment {
                per_aspect: self.aspect_ranks.clone(),
                global,
            },
        }
    }
}

pub(crate) fn least_aspect_ranks(
    kb: &KnowledgeBase,
    domain: &CanonicalDomain,
    aspects: &AspectSet,
) -> BTreeMap<Concept, RankFn> {
    let masks = DefeasibleMasks::new(domain, kb);
    aspects
        .iter()
        .map(|aspect| {
            let ranks = domain
                .elements()
                .map(|x| {
                    let violates = masks.violated[x]
                        .iter()
                        .any(|&j| kb.defeasible[j].rhs == *aspect);
                    u32::from(violates)
                })
                .collect();
            (aspect.clone(), RankFn(ranks))
        })
        .collect()
}

/// `m1` is overall preferred to `m2`: `m1` is aspect-minimal and its global
/// ranks are pointwise no higher, with a strict drop.
pub fn globally_preferred(
    m1: &EnrichedModel,
    m2: &EnrichedModel,
    pool: &AspectMinimalPool,
) -> Result<bool, SemanticsError> {
    if !m1.same_frame(m2) || m1.ranks.global.len() != m2.ranks.global.len() {
        return Err(SemanticsError::DomainMismatch);
    }
    Ok(pool.contains(m1) && m1.ranks.global.strictly_below(&m2.ranks.global))
}
