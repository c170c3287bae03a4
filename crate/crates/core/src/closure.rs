//! Rational closure of a TBox via exceptionality ranking.
//!
//! Exceptionality is decided classically: `C` is exceptional for a level when
//! the strict axioms plus `⊤ ⊑ ⨅(¬Cᵢ ⊔ Dᵢ)` (the materialization of the level's
//! defeasible axioms) entail `C ⊑ ⊥`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::concept::Concept;
use crate::kb::{Axiom, Inclusion, KnowledgeBase};
use crate::tableau::{is_satisfiable, StrictTBox};

/// The rank of a concept: a natural number, or infinite for concepts that
/// are exceptional at every level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(u32),
    Infinite,
}

impl Rank {
    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Rank::Finite(r) => Some(r),
            Rank::Infinite => None,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(r) => write!(f, "{r}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

/// `⨅(¬Cᵢ ⊔ Dᵢ)` over `T(Cᵢ) ⊑ Dᵢ`; `⊤` for no axioms.
pub fn materialization(defeasible: &[Inclusion]) -> Concept {
    Concept::conjunction(
        defeasible
            .iter()
            .map(|i| Concept::or(Concept::not(i.lhs.clone()), i.rhs.clone())),
    )
}

pub fn is_exceptional(c: &Concept, level: &[Inclusion], strict_core: &StrictTBox) -> bool {
    let tbox = if level.is_empty() {
        strict_core.clone()
    } else {
        strict_core.with(Inclusion::new(Concept::Top, materialization(level)))
    };
    !is_satisfiable(c, &tbox).satisfiable
}

/// The sequence `E₀ ⊇ E₁ ⊇ … ⊇ Eₙ`.
///
/// Only defeasible parts are stored per level; the strict core belongs to
/// every level. The last level is a fixpoint: its exceptional subset is itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedTBox {
    levels: Vec<Vec<Inclusion>>,
    strict_core: StrictTBox,
}

impl RankedTBox {
    pub fn levels(&self) -> &[Vec<Inclusion>] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &[Inclusion] {
        &self.levels[i]
    }

    pub fn strict_core(&self) -> &StrictTBox {
        &self.strict_core
    }

    pub fn fixpoint_index(&self) -> usize {
        self.levels.len() - 1
    }

    /// Index of the last level containing `axiom`, if any.
    pub fn deepest_level(&self, axiom: &Inclusion) -> Option<usize> {
        self.levels.iter().rposition(|l| l.contains(axiom))
    }

    fn is_exceptional_at(&self, c: &Concept, i: usize) -> bool {
        is_exceptional(c, &self.levels[i], &self.strict_core)
    }
}

pub fn compute_rank_sequence(kb: &KnowledgeBase) -> RankedTBox {
    let strict_core = StrictTBox::new(kb.strict.clone());
    let mut levels = vec![kb.defeasible.clone()];
    loop {
        let current = levels.last().expect("E0 is always present");
        let next: Vec<Inclusion> = current
            .iter()
            .filter(|ax| is_exceptional(&ax.lhs, current, &strict_core))
            .cloned()
            .collect();
        if next.len() == current.len() {
            break;
        }
        levels.push(next);
    }
    RankedTBox {
        levels,
        strict_core,
    }
}

/// Least `i` such that `c` is not exceptional for `Eᵢ`.
pub fn concept_rank(ranked: &RankedTBox, c: &Concept) -> Rank {
    (0..ranked.levels.len())
        .find(|&i| !ranked.is_exceptional_at(c, i))
        .map_or(Rank::Infinite, |i| Rank::Finite(i as u32))
}

pub fn in_rational_closure(kb: &KnowledgeBase, query: &Axiom) -> bool {
    RationalClosure::new(kb).entails(query)
}

pub fn satisfiable_wrt_kb<'a, I>(kb: &KnowledgeBase, concepts: I) -> bool
where
    I: IntoIterator<Item = &'a Concept>,
{
    RationalClosure::new(kb).is_satisfiable(concepts)
}

/// A ranked TBox together with a memo of concept ranks.
pub struct RationalClosure {
    ranked: RankedTBox,
    cache: Mutex<HashMap<Concept, Rank>>,
}

impl RationalClosure {
    pub fn new(kb: &KnowledgeBase) -> Self {
        Self::from_ranked(compute_rank_sequence(kb))
    }

    pub fn from_ranked(ranked: RankedTBox) -> Self {
        RationalClosure {
            ranked,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn ranked(&self) -> &RankedTBox {
        &self.ranked
    }

    pub fn rank(&self, c: &Concept) -> Rank {
        if let Some(r) = self.cache.lock().expect("rank cache poisoned").get(c) {
            return *r;
        }
        let r = concept_rank(&self.ranked, c);
        self.cache
            .lock()
            .expect("rank cache poisoned")
            .insert(c.clone(), r);
        r
    }

    /// `T(C) ⊑ D` iff `rank(C) < rank(C ⊓ ¬D)` or `rank(C) = ∞`;
    /// `C ⊑ D` iff `rank(C ⊓ ¬D) = ∞`.
    pub fn entails(&self, query: &Axiom) -> bool {
        match query {
            Axiom::Defeasible(i) => {
                let antecedent = self.rank(&i.lhs);
                if antecedent == Rank::Infinite {
                    return true;
                }
                let exception = self.rank(&counterexample(i));
                antecedent.cmp(&exception) == Ordering::Less
            }
            Axiom::Strict(i) => self.rank(&counterexample(i)) == Rank::Infinite,
        }
    }

    /// Whether the conjunction has finite rank.
    ///
    /// Exceptionality is antitone along the level sequence, so it suffices to
    /// test the fixpoint level.
    pub fn is_satisfiable<'a, I>(&self, concepts: I) -> bool
    where
        I: IntoIterator<Item = &'a Concept>,
    {
        let conj = Concept::conjunction(concepts.into_iter().cloned());
        if let Some(r) = self.cache.lock().expect("rank cache poisoned").get(&conj) {
            return r.is_finite();
        }
        !self
            .ranked
            .is_exceptional_at(&conj, self.ranked.fixpoint_index())
    }
}

fn counterexample(i: &Inclusion) -> Concept {
    Concept::and(i.lhs.clone(), Concept::not(i.rhs.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_axiom, parse_kb};

    fn atom(n: &str) -> Concept {
        Concept::atom(n)
    }

    const PENGUINS: &str = "Penguin => Bird
T(Bird) => HasNiceFeather
T(Bird) => Fly
T(Penguin) => not Fly";

    const STUDENTS: &str = "T(Student) => not EarnMoney
T((Student and Worker)) => EarnMoney
T(((Student and Worker) and Apprentice)) => not EarnMoney";

    fn q(s: &str) -> Axiom {
        parse_axiom(s).unwrap()
    }

    #[test]
    fn materialization_shapes() {
        let kb = parse_kb(PENGUINS).unwrap();
        assert_eq!(materialization(&[]), Concept::Top);
        assert_eq!(
            materialization(&kb.defeasible[..1]),
            Concept::or(Concept::not(atom("Bird")), atom("HasNiceFeather"))
        );
        assert_eq!(
            materialization(&kb.defeasible[..2]),
            Concept::and(
                Concept::or(Concept::not(atom("Bird")), atom("HasNiceFeather")),
                Concept::or(Concept::not(atom("Bird")), atom("Fly"))
            )
        );
    }

    #[test]
    fn exceptionality_at_e0() {
        let kb = parse_kb(PENGUINS).unwrap();
        let core = StrictTBox::new(kb.strict.clone());
        assert!(is_exceptional(&atom("Penguin"), &kb.defeasible, &core));
        assert!(!is_exceptional(&atom("Bird"), &kb.defeasible, &core));
        assert!(!is_exceptional(&atom("Bird"), &[], &core));
    }

    #[test]
    fn penguin_levels() {
        let kb = parse_kb(PENGUINS).unwrap();
        let ranked = compute_rank_sequence(&kb);
        assert_eq!(ranked.levels().len(), 3);
        assert_eq!(ranked.level(1), &kb.defeasible[2..]);
        assert!(ranked.level(2).is_empty());
        assert_eq!(concept_rank(&ranked, &atom("Bird")), Rank::Finite(0));
        assert_eq!(concept_rank(&ranked, &atom("Penguin")), Rank::Finite(1));
        assert_eq!(
            concept_rank(&ranked, &Concept::and(atom("Penguin"), atom("Fly"))),
            Rank::Finite(2)
        );
    }

    #[test]
    fn student_levels() {
        let kb = parse_kb(STUDENTS).unwrap();
        let ranked = compute_rank_sequence(&kb);
        let sizes: Vec<usize> = ranked.levels().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 2, 1, 0]);
        assert_eq!(ranked.deepest_level(&kb.defeasible[2]), Some(2));
        let blond = Concept::and(atom("Student"), atom("Blond"));
        assert_eq!(concept_rank(&ranked, &blond), Rank::Finite(0));
    }

    #[test]
    fn no_defeasible_axioms() {
        let kb = parse_kb("A => B").unwrap();
        let ranked = compute_rank_sequence(&kb);
        assert_eq!(ranked.fixpoint_index(), 0);
        assert_eq!(concept_rank(&ranked, &atom("A")), Rank::Finite(0));
    }

    #[test]
    fn contradiction_has_infinite_rank() {
        let kb = parse_kb(PENGUINS).unwrap();
        let ranked = compute_rank_sequence(&kb);
        let c = Concept::and(atom("Bird"), Concept::not(atom("Bird")));
        assert_eq!(concept_rank(&ranked, &c), Rank::Infinite);
    }

    #[test]
    fn self_exceptional_axioms_stay_at_fixpoint() {
        // A is exceptional for itself at every level
        let kb = parse_kb("T(A) => not A").unwrap();
        let ranked = compute_rank_sequence(&kb);
        assert_eq!(ranked.levels().len(), 1);
        assert_eq!(concept_rank(&ranked, &atom("A")), Rank::Infinite);
        assert!(in_rational_closure(&kb, &q("T(A) => B")));
        assert!(in_rational_closure(&kb, &q("A => bot")));
    }

    #[test]
    fn penguin_closure() {
        let kb = parse_kb(PENGUINS).unwrap();
        assert!(in_rational_closure(&kb, &q("T(Penguin) => not Fly")));
        assert!(!in_rational_closure(
            &kb,
            &q("T(Penguin) => HasNiceFeather")
        ));
        assert!(in_rational_closure(&kb, &q("T(Bird) => Fly")));
        assert!(in_rational_closure(&kb, &q("T(Penguin) => Penguin")));
        assert!(in_rational_closure(&kb, &q("Penguin => Bird")));
        assert!(!in_rational_closure(&kb, &q("Bird => Fly")));
    }

    #[test]
    fn kb_satisfiability() {
        let kb = parse_kb(PENGUINS).unwrap();
        let rc = RationalClosure::new(&kb);
        assert!(rc.is_satisfiable([&atom("Penguin"), &atom("Fly")]));
        assert!(!rc.is_satisfiable([&atom("Bird"), &Concept::not(atom("Bird"))]));
        assert!(satisfiable_wrt_kb(&KnowledgeBase::new(), [&atom("Bird")]));
    }

    #[test]
    fn cached_ranks_match_uncached() {
        let kb = parse_kb(STUDENTS).unwrap();
        let rc = RationalClosure::new(&kb);
        let c = Concept::and(atom("Student"), atom("Worker"));
        let first = rc.rank(&c);
        assert_eq!(first, rc.rank(&c));
        assert_eq!(first, concept_rank(rc.ranked(), &c));
        assert_eq!(first, Rank::Finite(1));
    }
}
