//! Canonical domains: one element per maximal KB-satisfiable type over the
//! subconcept closure.

use std::collections::{BTreeMap, BTreeSet};

use crate::closure::RationalClosure;
use crate::concept::{Concept, Name};
use crate::kb::{Axiom, KnowledgeBase};
use crate::semantics::SemanticsError;

pub type ElementId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDomain {
    /// The subconcept closure the types range over.
    pub closure: BTreeSet<Concept>,
    /// Each element is the set of closure members it satisfies.
    pub types: Vec<BTreeSet<Concept>>,
    /// `(x, y)` is an `R` edge iff every `∀R.C ∈ x` has `C ∈ y` (and every
    /// `¬∃R.C ∈ x` has `¬C ∈ y`).
    pub role_edges: BTreeMap<Name, BTreeSet<(ElementId, ElementId)>>,
}

/// Concepts mentioned by a query.
pub fn query_concepts(query: &Axiom) -> [&Concept; 2] {
    let i = query.inclusion();
    [&i.lhs, &i.rhs]
}

pub fn build_canonical_domain(
    kb: &KnowledgeBase,
    query: &Axiom,
) -> Result<CanonicalDomain, SemanticsError> {
    build_canonical_domain_with(kb, &RationalClosure::new(kb), query_concepts(query))
}

/// Builds the domain over `subconcept_closure(kb, extra)`, reusing an
/// already ranked TBox.
pub fn build_canonical_domain_with<'a, I>(
    kb: &'a KnowledgeBase,
    closure: &RationalClosure,
    extra: I,
) -> Result<CanonicalDomain, SemanticsError>
where
    I: IntoIterator<Item = &'a Concept>,
{
    let s = crate::kb::subconcept_closure(kb, extra);
    // one representative per complementary pair; short concepts first so that
    // compound members are forced by the atoms chosen before them
    // (a double negation ¬¬C is its own representative, paired with ¬C)
    let mut reps: Vec<Concept> = s
        .iter()
        .filter(|c| match c {
            Concept::Not(inner) => matches!(**inner, Concept::Not(_)),
            _ => true,
        })
        .cloned()
        .collect();
    reps.sort_by_key(|c| (c.subconcepts().len(), c.clone()));

    let mut types = Vec::new();
    let mut chosen = Vec::new();
    enumerate_types(closure, &reps, &mut chosen, &mut types);
    if types.is_empty() {
        return Err(SemanticsError::InconsistentKb);
    }

    let mut roles: BTreeSet<Name> = s.iter().flat_map(Concept::roles).collect();
    for a in &kb.abox {
        if let crate::kb::Assertion::Role { role, .. } = a {
            roles.insert(role.clone());
        }
    }
    let mut role_edges = BTreeMap::new();
    for r in roles {
        let mut edges = BTreeSet::new();
        for (x, tx) in types.iter().enumerate() {
            let required: Vec<Concept> = tx
                .iter()
                .filter_map(|c| match c {
                    Concept::Forall(s, d) if *s == r => Some((**d).clone()),
                    Concept::Not(inner) => match &**inner {
                        Concept::Exists(s, d) if *s == r => Some(d.complement()),
                        _ => None,
                    },
                    _ => None,
                })
                .collect();
            for (y, ty) in types.iter().enumerate() {
                if required.iter().all(|d| ty.contains(d)) {
                    edges.insert((x, y));
                }
            }
        }
        role_edges.insert(r, edges);
    }

    Ok(CanonicalDomain {
        closure: s,
        types,
        role_edges,
    })
}

fn enumerate_types(
    closure: &RationalClosure,
    reps: &[Concept],
    chosen: &mut Vec<Concept>,
    out: &mut Vec<BTreeSet<Concept>>,
) {
    if chosen.len() == reps.len() {
        out.push(chosen.iter().cloned().collect());
        return;
    }
    let rep = &reps[chosen.len()];
    for pick in [rep.clone(), rep.complement()] {
        chosen.push(pick);
        if closure.is_satisfiable(chosen.iter()) {
            enumerate_types(closure, reps, chosen, out);
        }
        chosen.pop();
    }
}

impl CanonicalDomain {
    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.types.len()
    }

    /// Stable display name for an element.
    pub fn element_name(x: ElementId) -> String {
        format!("e{x}")
    }

    /// Structural evaluation as a membership mask.
    pub fn mask(&self, c: &Concept) -> Vec<bool> {
        let n = self.len();
        match c {
            Concept::Top => vec![true; n],
            Concept::Bottom => vec![false; n],
            Concept::Atom(_) => self.types.iter().map(|t| t.contains(c)).collect(),
            Concept::Not(inner) => self.mask(inner).into_iter().map(|b| !b).collect(),
            Concept::And(a, b) => {
                let (a, b) = (self.mask(a), self.mask(b));
                a.into_iter().zip(b).map(|(p, q)| p && q).collect()
            }
            Concept::Or(a, b) => {
                let (a, b) = (self.mask(a), self.mask(b));
                a.into_iter().zip(b).map(|(p, q)| p || q).collect()
            }
            Concept::Exists(r, inner) => {
                let filler = self.mask(inner);
                let mut v = vec![false; n];
                for &(x, y) in self.role_edges.get(r).into_iter().flatten() {
                    v[x] |= filler[y];
                }
                v
            }
            Concept::Forall(r, inner) => {
                let filler = self.mask(inner);
                let mut v = vec![true; n];
                for &(x, y) in self.role_edges.get(r).into_iter().flatten() {
                    v[x] &= filler[y];
                }
                v
            }
        }
    }
}

pub fn eval_concept(domain: &CanonicalDomain, c: &Concept) -> BTreeSet<ElementId> {
    domain
        .mask(c)
        .into_iter()
        .enumerate()
        .filter_map(|(x, m)| m.then_some(x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_axiom, parse_kb};

    fn atom(n: &str) -> Concept {
        Concept::atom(n)
    }

    fn domain(kb: &str, query: &str) -> CanonicalDomain {
        build_canonical_domain(&parse_kb(kb).unwrap(), &parse_axiom(query).unwrap()).unwrap()
    }

    const PENGUINS: &str = "Penguin => Bird
T(Bird) => HasNiceFeather
T(Bird) => Fly
T(Penguin) => not Fly";

    #[test]
    fn penguin_types() {
        let d = domain(PENGUINS, "T(Penguin) => HasNiceFeather");
        // 16 atom assignments minus the 4 non-bird penguins
        assert_eq!(d.len(), 12);
        let y: BTreeSet<Concept> = [
            atom("Penguin"),
            atom("Bird"),
            Concept::not(atom("Fly")),
            atom("HasNiceFeather"),
        ]
        .into();
        let z: BTreeSet<Concept> = [
            atom("Penguin"),
            atom("Bird"),
            Concept::not(atom("Fly")),
            Concept::not(atom("HasNiceFeather")),
        ]
        .into();
        assert!(d.types.iter().any(|t| t == &y));
        assert!(d.types.iter().any(|t| t == &z));
    }

    #[test]
    fn single_atom() {
        let d = domain("", "A => A");
        assert_eq!(d.len(), 2);
        assert_eq!(eval_concept(&d, &Concept::Top).len(), 2);
    }

    #[test]
    fn strict_axiom_filters_types() {
        let d = domain("A => B", "A => B");
        let bad = eval_concept(&d, &Concept::and(atom("A"), Concept::not(atom("B"))));
        assert!(bad.is_empty());
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn inconsistent_kb() {
        let kb = parse_kb("A => bot\ntop => A").unwrap();
        let q = parse_axiom("A => A").unwrap();
        assert_eq!(
            build_canonical_domain(&kb, &q),
            Err(SemanticsError::InconsistentKb)
        );
    }

    #[test]
    fn penguin_evaluation() {
        let d = domain(PENGUINS, "T(Penguin) => HasNiceFeather");
        let got = eval_concept(
            &d,
            &Concept::and(atom("Penguin"), Concept::not(atom("Fly"))),
        );
        let want: BTreeSet<_> = d
            .elements()
            .filter(|&x| {
                d.types[x].contains(&atom("Penguin"))
                    && d.types[x].contains(&Concept::not(atom("Fly")))
            })
            .collect();
        assert_eq!(got.len(), 2);
        assert_eq!(got, want);
    }

    #[test]
    fn roles_truth_lemma() {
        let kb = "A => exists R.B
T(B) => forall R.not A
exists R.A => C";
        let d = domain(kb, "T(A) => exists R.(B and C)");
        assert!(!d.is_empty());
        for c in &d.closure {
            let mask = d.mask(c);
            for x in d.elements() {
                assert_eq!(mask[x], d.types[x].contains(c), "{c} at e{x}");
            }
        }
        // existential witnesses
        for x in d.elements() {
            for c in &d.types[x] {
                let (r, filler) = match c {
                    Concept::Exists(r, f) => (r, (**f).clone()),
                    Concept::Not(inner) => match &**inner {
                        Concept::Forall(r, f) => (r, f.complement()),
                        _ => continue,
                    },
                    _ => continue,
                };
                let edges = &d.role_edges[r];
                assert!(d
                    .elements()
                    .any(|y| edges.contains(&(x, y)) && d.types[y].contains(&filler)));
            }
        }
    }
}
