//! Knowledge bases: strict and defeasible inclusions plus ABox assertions.

use std::collections::BTreeSet;
use std::fmt;

use crate::concept::{Concept, Name};

/// `lhs ⊑ rhs`, or `T(lhs) ⊑ rhs` when wrapped in [`Axiom::Defeasible`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inclusion {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Inclusion {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Inclusion { lhs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Strict(Inclusion),
    /// `T(lhs) ⊑ rhs`: typical instances of `lhs` are `rhs`.
    Defeasible(Inclusion),
}

impl Axiom {
    pub fn strict(lhs: Concept, rhs: Concept) -> Self {
        Axiom::Strict(Inclusion::new(lhs, rhs))
    }

    pub fn defeasible(lhs: Concept, rhs: Concept) -> Self {
        Axiom::Defeasible(Inclusion::new(lhs, rhs))
    }

    pub fn inclusion(&self) -> &Inclusion {
        match self {
            Axiom::Strict(i) | Axiom::Defeasible(i) => i,
        }
    }

    pub fn is_defeasible(&self) -> bool {
        matches!(self, Axiom::Defeasible(_))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Strict(i) => write!(f, "{} => {}", i.lhs, i.rhs),
            Axiom::Defeasible(i) => write!(f, "T({}) => {}", i.lhs, i.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    /// `C(a)`, or `T(C)(a)` when `typical` is set.
    Concept {
        concept: Concept,
        individual: Name,
        typical: bool,
    },
    /// `R(a, b)`.
    Role {
        role: Name,
        subject: Name,
        object: Name,
    },
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept {
                concept,
                individual,
                typical: true,
            } => write!(f, "T({concept})({individual})"),
            Assertion::Concept {
                concept,
                individual,
                typical: false,
            } => match concept {
                // a bare `not A(x)` would be fine too, but the grouping keeps
                // compound heads readable
                Concept::Atom(_) | Concept::Top | Concept::Bottom => {
                    write!(f, "{concept}({individual})")
                }
                _ => write!(f, "({concept})({individual})"),
            },
            Assertion::Role {
                role,
                subject,
                object,
            } => write!(f, "{role}({subject}, {object})"),
        }
    }
}

/// A TBox split into its strict and defeasible parts, plus an ABox.
///
/// Order is kept for reporting only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KnowledgeBase {
    pub strict: Vec<Inclusion>,
    pub defeasible: Vec<Inclusion>,
    pub abox: Vec<Assertion>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, axiom: Axiom) {
        match axiom {
            Axiom::Strict(i) => self.strict.push(i),
            Axiom::Defeasible(i) => self.defeasible.push(i),
        }
    }

    pub fn with_axioms<I: IntoIterator<Item = Axiom>>(axioms: I) -> Self {
        let mut kb = Self::new();
        for a in axioms {
            kb.push(a);
        }
        kb
    }

    pub fn axioms(&self) -> impl Iterator<Item = Axiom> + '_ {
        self.strict
            .iter()
            .cloned()
            .map(Axiom::Strict)
            .chain(self.defeasible.iter().cloned().map(Axiom::Defeasible))
    }

    pub fn is_empty(&self) -> bool {
        self.strict.is_empty() && self.defeasible.is_empty() && self.abox.is_empty()
    }

    /// Every concept appearing at the top of an axiom side or assertion head.
    fn top_level_concepts(&self) -> impl Iterator<Item = &Concept> {
        let tbox = self
            .strict
            .iter()
            .chain(self.defeasible.iter())
            .flat_map(|i| [&i.lhs, &i.rhs]);
        let abox = self.abox.iter().filter_map(|a| match a {
            Assertion::Concept { concept, .. } => Some(concept),
            Assertion::Role { .. } => None,
        });
        tbox.chain(abox)
    }

    pub fn individuals(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for a in &self.abox {
            match a {
                Assertion::Concept { individual, .. } => {
                    out.insert(individual.clone());
                }
                Assertion::Role {
                    subject, object, ..
                } => {
                    out.insert(subject.clone());
                    out.insert(object.clone());
                }
            }
        }
        out
    }
}

/// Serializes to the line-oriented KB format: strict axioms, then defeasible
/// axioms, then assertions.
impl fmt::Display for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.strict {
            writeln!(f, "{} => {}", i.lhs, i.rhs)?;
        }
        for i in &self.defeasible {
            writeln!(f, "T({}) => {}", i.lhs, i.rhs)?;
        }
        for a in &self.abox {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// The concepts that index a preference relation of their own.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AspectSet {
    pub aspects: BTreeSet<Concept>,
}

impl AspectSet {
    pub fn contains(&self, c: &Concept) -> bool {
        self.aspects.contains(c)
    }

    pub fn len(&self) -> usize {
        self.aspects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aspects.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Concept> {
        self.aspects.iter()
    }
}

/// All subconcepts of the KB and of `extra`, closed under complement.
pub fn subconcept_closure<'a, I>(kb: &'a KnowledgeBase, extra: I) -> BTreeSet<Concept>
where
    I: IntoIterator<Item = &'a Concept>,
{
    let mut base = BTreeSet::new();
    for c in kb.top_level_concepts().chain(extra) {
        c.collect_subconcepts(&mut base);
    }
    let negations: Vec<Concept> = base.iter().map(Concept::complement).collect();
    base.extend(negations);
    base
}

/// Subexpression occurrences of the TBox axioms, deduplicated, with no
/// negations added.
pub fn aspect_set(kb: &KnowledgeBase) -> AspectSet {
    let mut aspects = BTreeSet::new();
    for i in kb.strict.iter().chain(kb.defeasible.iter()) {
        i.lhs.collect_subconcepts(&mut aspects);
        i.rhs.collect_subconcepts(&mut aspects);
    }
    AspectSet { aspects }
}
