//! Least-fixpoint search for global rank functions on a fixed domain.
//!
//! Every requirement on the global ranks that the semantics imposes, once the
//! concept ranks used by the specificity condition are fixed, is a monotone
//! lower bound: `g(y) ≥ g(x) + 1` for forced pairs, `g(y) ≥ min_{C∩A} g + 1`
//! for each `y ∈ C ∩ ¬A` (typicality), `g ≥ r` on the instances of an
//! antecedent whose rank is guessed as `r`. The pointwise least solution of
//! such a system exists whenever any solution does, which is what makes the
//! searches here exact rather than heuristic.
//!
//! Elements that agree on every antecedent and consequent (and on any extra
//! concept of interest) are interchangeable, so the search runs on these
//! profile classes and expands the result back to elements.

use std::collections::{BTreeMap, BTreeSet};

use crate::closure::Rank;
use crate::concept::Concept;
use crate::kb::KnowledgeBase;
use crate::semantics::domain::CanonicalDomain;
use crate::semantics::model::{specificity_dominates, DefeasibleMasks, RankFn};
use crate::semantics::SemanticsError;

pub(crate) struct Frame {
    pub class_of: Vec<usize>,
    pub classes: usize,
    /// Per defeasible axiom, membership of each class in the antecedent.
    antecedent: Vec<Vec<bool>>,
    consequent: Vec<Vec<bool>>,
    /// Per class, the defeasible axioms it violates.
    violated: Vec<Vec<usize>>,
    /// Per class, the distinct consequents it violates.
    violated_aspects: Vec<BTreeSet<usize>>,
    /// Per extra concept, class membership.
    pub extra: Vec<Vec<bool>>,
}

impl Frame {
    pub fn new(domain: &CanonicalDomain, kb: &KnowledgeBase, extra: &[&Concept]) -> Self {
        let masks = DefeasibleMasks::new(domain, kb);
        let extra_masks: Vec<Vec<bool>> = extra.iter().map(|c| domain.mask(c)).collect();
        let mut index: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(domain.len());
        let mut reps = Vec::new();
        for x in domain.elements() {
            let profile: Vec<bool> = masks
                .antecedent
                .iter()
                .chain(&masks.consequent)
                .chain(&extra_masks)
                .map(|m| m[x])
                .collect();
            let next = index.len();
            let c = *index.entry(profile).or_insert(next);
            if c == next {
                reps.push(x);
            }
            class_of.push(c);
        }
        let lift = |m: &Vec<bool>| reps.iter().map(|&x| m[x]).collect::<Vec<bool>>();
        let rhs_ids: Vec<usize> = kb
            .defeasible
            .iter()
            .map(|i| kb.defeasible.iter().position(|o| o.rhs == i.rhs).unwrap())
            .collect();
        Frame {
            classes: reps.len(),
            antecedent: masks.antecedent.iter().map(lift).collect(),
            consequent: masks.consequent.iter().map(lift).collect(),
            violated: reps.iter().map(|&x| masks.violated[x].clone()).collect(),
            violated_aspects: reps
                .iter()
                .map(|&x| masks.violated[x].iter().map(|&j| rhs_ids[j]).collect())
                .collect(),
            extra: extra_masks.iter().map(lift).collect(),
            class_of,
        }
    }

    pub fn expand(&self, g: &[u32]) -> RankFn {
        RankFn(self.class_of.iter().map(|&c| g[c]).collect())
    }

    fn concept_rank(g: &[u32], mask: &[bool]) -> Rank {
        g.iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(&r, _)| r)
            .min()
            .map_or(Rank::Infinite, Rank::Finite)
    }

    /// Distinct non-empty antecedent masks, and for each axiom its group.
    fn antecedent_groups(&self) -> (Vec<Vec<bool>>, Vec<Option<usize>>) {
        let mut groups: Vec<Vec<bool>> = Vec::new();
        let of = self
            .antecedent
            .iter()
            .map(|m| {
                if !m.iter().any(|&b| b) {
                    return None;
                }
                Some(match groups.iter().position(|g| g == m) {
                    Some(i) => i,
                    None => {
                        groups.push(m.clone());
                        groups.len() - 1
                    }
                })
            })
            .collect();
        (groups, of)
    }

    /// Forced pairs from the specificity condition under fixed axiom ranks.
    fn specificity_pairs(&self, axiom_rank: &[Rank]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.classes {
            for y in 0..self.classes {
                if x != y && specificity_dominates(&self.violated[x], &self.violated[y], axiom_rank)
                {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Forced pairs from aspect dominance under the least aspect ranks:
    /// `x` violates strictly fewer consequents than `y`.
    fn least_aspect_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.classes {
            for y in 0..self.classes {
                let (vx, vy) = (&self.violated_aspects[x], &self.violated_aspects[y]);
                if vx.len() < vy.len() && vx.is_subset(vy) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

struct System<'f> {
    frame: &'f Frame,
    forced: Vec<(usize, usize)>,
    lower: Vec<u32>,
    /// `g(w) ≥ g(t)` for every listed `w`.
    anchor: Option<(usize, Vec<usize>)>,
}

impl System<'_> {
    fn least(&self, cap: u32) -> Option<Vec<u32>> {
        let f = self.frame;
        let mut g = self.lower.clone();
        if g.iter().any(|&r| r > cap) {
            return None;
        }
        let raise = |g: &mut Vec<u32>, y: usize, to: u32| -> Result<bool, ()> {
            if to > cap {
                return Err(());
            }
            if g[y] < to {
                g[y] = to;
                Ok(true)
            } else {
                Ok(false)
            }
        };
        loop {
            let mut changed = false;
            for &(x, y) in &self.forced {
                let to = g[x] + 1;
                changed |= raise(&mut g, y, to).ok()?;
            }
            for j in 0..f.antecedent.len() {
                let best = (0..f.classes)
                    .filter(|&c| f.antecedent[j][c] && f.consequent[j][c])
                    .map(|c| g[c])
                    .min();
                for y in 0..f.classes {
                    if f.antecedent[j][y] && !f.consequent[j][y] {
                        let to = best? + 1;
                        changed |= raise(&mut g, y, to).ok()?;
                    }
                }
            }
            if let Some((t, ws)) = &self.anchor {
                let to = g[*t];
                for &w in ws {
                    changed |= raise(&mut g, w, to).ok()?;
                }
            }
            if !changed {
                return Some(g);
            }
        }
    }
}

fn odometer(digits: usize, max: u32, mut visit: impl FnMut(&[u32])) {
    let mut r = vec![0u32; digits];
    loop {
        visit(&r);
        let mut i = 0;
        loop {
            if i == digits {
                return;
            }
            if r[i] < max {
                r[i] += 1;
                break;
            }
            r[i] = 0;
            i += 1;
        }
    }
}

fn guess_space(groups: usize, cap: u32, limit: u64) -> Result<(), SemanticsError> {
    let required = (u64::from(cap) + 1)
        .checked_pow(groups as u32)
        .unwrap_or(u64::MAX);
    if required > limit {
        Err(SemanticsError::SearchSpaceTooLarge { limit, required })
    } else {
        Ok(())
    }
}

/// Per-axiom ranks and per-class lower bounds for a guess on the groups.
fn apply_guess(
    frame: &Frame,
    groups: &[Vec<bool>],
    group_of: &[Option<usize>],
    r: &[u32],
) -> (Vec<Rank>, Vec<u32>) {
    let axiom_rank = group_of
        .iter()
        .map(|g| g.map_or(Rank::Infinite, |g| Rank::Finite(r[g])))
        .collect();
    let lower = (0..frame.classes)
        .map(|c| {
            groups
                .iter()
                .zip(r)
                .filter(|(m, _)| m[c])
                .map(|(_, &v)| v)
                .max()
                .unwrap_or(0)
        })
        .collect();
    (axiom_rank, lower)
}

fn guess_realized(g: &[u32], groups: &[Vec<bool>], r: &[u32]) -> bool {
    groups
        .iter()
        .zip(r)
        .all(|(m, &v)| Frame::concept_rank(g, m) == Rank::Finite(v))
}

fn pointwise_minimal(solutions: BTreeSet<Vec<u32>>) -> Vec<Vec<u32>> {
    let all: Vec<Vec<u32>> = solutions.into_iter().collect();
    all.iter()
        .filter(|g| {
            !all.iter()
                .any(|h| h != *g && h.iter().zip(g.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect()
}

/// Global ranks (per class) of the minimal models whose aspect ranks are the
/// least ones, with all ranks at most `cap`. Sorted lexicographically.
pub(crate) fn enriched_minimal(
    frame: &Frame,
    cap: u32,
    limit: u64,
) -> Result<Vec<Vec<u32>>, SemanticsError> {
    let (groups, group_of) = frame.antecedent_groups();
    guess_space(groups.len(), cap, limit)?;
    let aspect_pairs = frame.least_aspect_pairs();
    let mut found = BTreeSet::new();
    odometer(groups.len(), cap, |r| {
        let (axiom_rank, lower) = apply_guess(frame, &groups, &group_of, r);
        let mut forced = aspect_pairs.clone();
        forced.extend(frame.specificity_pairs(&axiom_rank));
        let system = System {
            frame,
            forced,
            lower,
            anchor: None,
        };
        if let Some(g) = system.least(cap) {
            if guess_realized(&g, &groups, r) {
                found.insert(g);
            }
        }
    });
    Ok(pointwise_minimal(found))
}

/// The least global ranks satisfying typicality alone.
pub(crate) fn single_least(frame: &Frame, cap: u32) -> Option<Vec<u32>> {
    System {
        frame,
        forced: Vec::new(),
        lower: vec![0; frame.classes],
        anchor: None,
    }
    .least(cap)
}

/// Classes of the first extra concept, and of the first without the second.
fn query_classes(frame: &Frame) -> (Vec<usize>, Vec<usize>) {
    let lhs = &frame.extra[0];
    let rhs = &frame.extra[1];
    let inside: Vec<usize> = (0..frame.classes).filter(|&c| lhs[c]).collect();
    let outside = inside.iter().copied().filter(|&c| !rhs[c]).collect();
    (inside, outside)
}

/// A single-preference model (all ranks ≤ `cap`) in which some minimal
/// instance of `extra[0]` is outside `extra[1]`.
pub(crate) fn single_countermodel(frame: &Frame, cap: u32) -> Option<Vec<u32>> {
    let (inside, outside) = query_classes(frame);
    outside.into_iter().find_map(|t| {
        System {
            frame,
            forced: Vec::new(),
            lower: vec![0; frame.classes],
            anchor: Some((t, inside.clone())),
        }
        .least(cap)
    })
}

/// As [`single_countermodel`], over enriched models.
///
/// Any enriched model's global ranks `g` satisfy typicality and the
/// specificity condition under `g`'s own concept ranks; conversely such a `g`
/// is the global part of the enriched model that uses `g` for every aspect.
/// So it suffices to search for `g`.
pub(crate) fn enriched_countermodel(
    frame: &Frame,
    cap: u32,
    limit: u64,
) -> Result<Option<Vec<u32>>, SemanticsError> {
    let (groups, group_of) = frame.antecedent_groups();
    guess_space(groups.len(), cap, limit)?;
    let (inside, outside) = query_classes(frame);
    let mut best: Option<Vec<u32>> = None;
    odometer(groups.len(), cap, |r| {
        if best.is_some() {
            return;
        }
        let (axiom_rank, lower) = apply_guess(frame, &groups, &group_of, r);
        let forced = frame.specificity_pairs(&axiom_rank);
        for &t in &outside {
            let system = System {
                frame,
                forced: forced.clone(),
                lower: lower.clone(),
                anchor: Some((t, inside.clone())),
            };
            if let Some(g) = system.least(cap) {
                if guess_realized(&g, &groups, r) {
                    best = Some(g);
                    return;
                }
            }
        }
    });
    Ok(best)
}

/// Every class-level rank vector with entries at most `cap`, in
/// lexicographic order, subject to `limit`.
pub(crate) fn all_rank_vectors(
    frame: &Frame,
    cap: u32,
    limit: u64,
    mut visit: impl FnMut(&[u32]),
) -> Result<(), SemanticsError> {
    guess_space(frame.classes, cap, limit)?;
    let mut buf = vec![0; frame.classes];
    odometer(frame.classes, cap, |r| {
        // odometer varies the first digit fastest; reverse for lex order
        for (i, v) in r.iter().rev().enumerate() {
            buf[i] = *v;
        }
        visit(&buf);
    });
    Ok(())
}
