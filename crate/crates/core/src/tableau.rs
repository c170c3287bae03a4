//! Classical ALC satisfiability.
//!
//! A depth-first completion-tree tableau. The TBox is internalized: every
//! node carries `⨅(¬Cᵢ ⊔ Dᵢ)`. Termination comes from subset blocking against
//! ancestors. Disjunctions are explored left branch first, so witnesses are
//! reproducible.

use std::collections::HashMap;

use crate::concept::{to_nnf, Concept, Name};
use crate::interpretation::Interpretation;
use crate::kb::Inclusion;

/// A T-free TBox.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StrictTBox {
    pub axioms: Vec<Inclusion>,
}

impl StrictTBox {
    pub fn new(axioms: Vec<Inclusion>) -> Self {
        StrictTBox { axioms }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with(&self, extra: Inclusion) -> Self {
        let mut axioms = self.axioms.clone();
        axioms.push(extra);
        StrictTBox { axioms }
    }

    /// `⨅(¬Cᵢ ⊔ Dᵢ)` over the axioms, or `None` for an empty TBox.
    fn internalized(&self) -> Option<Concept> {
        if self.axioms.is_empty() {
            return None;
        }
        Some(Concept::conjunction(self.axioms.iter().map(|i| {
            Concept::or(Concept::not(i.lhs.clone()), i.rhs.clone())
        })))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    /// A model of the TBox whose element 0 is an instance of the input.
    pub witness: Option<Interpretation>,
}

pub fn is_satisfiable(c: &Concept, tbox: &StrictTBox) -> SatResult {
    let mut arena = Arena::default();
    let root = arena.intern(&to_nnf(c));
    let global = tbox.internalized().map(|t| arena.intern(&to_nnf(&t)));
    arena.link_complements();

    let mut search = Search {
        arena: &arena,
        global,
        words: arena.nodes.len().div_ceil(64),
        labels: Vec::new(),
        edges: Vec::new(),
    };
    let mut label = search.empty_label();
    label.insert(root);
    if let Some(g) = global {
        label.insert(g);
    }
    let satisfiable = search.expand(label, &mut Vec::new(), None);
    let witness = satisfiable.then(|| search.witness());
    SatResult {
        satisfiable,
        witness,
    }
}

pub fn entails_strict(tbox: &StrictTBox, lhs: &Concept, rhs: &Concept) -> bool {
    let probe = Concept::and(lhs.clone(), Concept::not(rhs.clone()));
    !is_satisfiable(&probe, tbox).satisfiable
}

pub fn is_consistent_set<'a, I>(concepts: I, tbox: &StrictTBox) -> bool
where
    I: IntoIterator<Item = &'a Concept>,
{
    let conj = Concept::conjunction(concepts.into_iter().cloned());
    is_satisfiable(&conj, tbox).satisfiable
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Top,
    Bottom,
    Atom(Name),
    NegAtom(Name),
    And(u32, u32),
    Or(u32, u32),
    Exists(Name, u32),
    Forall(Name, u32),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
    /// For atoms and negated atoms: the id of the opposite literal, if interned.
    opposite: Vec<Option<u32>>,
}

impl Arena {
    fn intern(&mut self, c: &Concept) -> u32 {
        let node = match c {
            Concept::Top => Node::Top,
            Concept::Bottom => Node::Bottom,
            Concept::Atom(a) => Node::Atom(a.clone()),
            Concept::Not(inner) => match &**inner {
                Concept::Atom(a) => Node::NegAtom(a.clone()),
                _ => unreachable!("input is in negation normal form"),
            },
            Concept::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Concept::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Concept::Exists(r, a) => Node::Exists(r.clone(), self.intern(a)),
            Concept::Forall(r, a) => Node::Forall(r.clone(), self.intern(a)),
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    fn link_complements(&mut self) {
        self.opposite = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Atom(a) => self.index.get(&Node::NegAtom(a.clone())).copied(),
                Node::NegAtom(a) => self.index.get(&Node::Atom(a.clone())).copied(),
                _ => None,
            })
            .collect();
    }
}

#[derive(Clone, PartialEq, Eq)]
struct Label(Vec<u64>);

impl Label {
    fn insert(&mut self, id: u32) -> bool {
        let (w, b) = (id as usize / 64, id % 64);
        let fresh = self.0[w] & (1 << b) == 0;
        self.0[w] |= 1 << b;
        fresh
    }

    fn contains(&self, id: u32) -> bool {
        self.0[id as usize / 64] & (1 << (id % 64)) != 0
    }

    fn is_subset(&self, other: &Label) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64u32)
                .filter(move |b| bits & (1 << b) != 0)
                .map(move |b| w as u32 * 64 + b)
        })
    }
}

struct Search<'a> {
    arena: &'a Arena,
    global: Option<u32>,
    words: usize,
    labels: Vec<Label>,
    edges: Vec<(usize, Name, usize)>,
}

impl Search<'_> {
    fn empty_label(&self) -> Label {
        Label(vec![0; self.words])
    }

    /// Closes the label under ⊓; `None` on a clash.
    fn saturate(&self, mut label: Label) -> Option<Label> {
        let mut work: Vec<u32> = label.ids().collect();
        while let Some(id) = work.pop() {
            match self.arena.nodes[id as usize] {
                Node::Bottom => return None,
                Node::Atom(_) | Node::NegAtom(_) => {
                    if let Some(opp) = self.arena.opposite[id as usize] {
                        if label.contains(opp) {
                            return None;
                        }
                    }
                }
                Node::And(a, b) => {
                    for part in [a, b] {
                        if label.insert(part) {
                            work.push(part);
                        }
                    }
                }
                _ => {}
            }
        }
        Some(label)
    }

    fn open_disjunction(&self, label: &Label) -> Option<(u32, u32)> {
        label
            .ids()
            .find_map(|id| match self.arena.nodes[id as usize] {
                Node::Or(a, b) if !label.contains(a) && !label.contains(b) => Some((a, b)),
                _ => None,
            })
    }

    fn expand(
        &mut self,
        label: Label,
        ancestors: &mut Vec<(Label, usize)>,
        parent: Option<(usize, Name)>,
    ) -> bool {
        let Some(label) = self.saturate(label) else {
            return false;
        };
        if let Some((left, right)) = self.open_disjunction(&label) {
            let mark = (self.labels.len(), self.edges.len());
            for pick in [left, right] {
                let mut branch = label.clone();
                branch.insert(pick);
                if self.expand(branch, ancestors, parent.clone()) {
                    return true;
                }
                self.labels.truncate(mark.0);
                self.edges.truncate(mark.1);
            }
            return false;
        }

        if let Some((_, blocker)) = ancestors.iter().find(|(anc, _)| label.is_subset(anc)) {
            let (p, role) = parent.expect("the root has no ancestors");
            self.edges.push((p, role, *blocker));
            return true;
        }

        let me = self.labels.len();
        self.labels.push(label.clone());
        if let Some((p, role)) = parent {
            self.edges.push((p, role, me));
        }

        let successors: Vec<(Name, Label)> = label
            .ids()
            .filter_map(|id| match &self.arena.nodes[id as usize] {
                Node::Exists(r, filler) => Some((r.clone(), *filler)),
                _ => None,
            })
            .map(|(r, filler)| {
                let mut succ = self.empty_label();
                succ.insert(filler);
                for id in label.ids() {
                    if let Node::Forall(s, d) = &self.arena.nodes[id as usize] {
                        if *s == r {
                            succ.insert(*d);
                        }
                    }
                }
                if let Some(g) = self.global {
                    succ.insert(g);
                }
                (r, succ)
            })
            .collect();

        ancestors.push((label, me));
        let ok = successors
            .into_iter()
            .all(|(r, succ)| self.expand(succ, ancestors, Some((me, r))));
        ancestors.pop();
        ok
    }

    fn witness(&self) -> Interpretation {
        let mut interp = Interpretation {
            size: self.labels.len(),
            ..Default::default()
        };
        for (x, label) in self.labels.iter().enumerate() {
            for id in label.ids() {
                if let Node::Atom(a) = &self.arena.nodes[id as usize] {
                    interp.atoms.entry(a.clone()).or_default().insert(x);
                }
            }
        }
        for (x, r, y) in &self.edges {
            interp.roles.entry(r.clone()).or_default().insert((*x, *y));
        }
        interp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn atom(n: &str) -> Concept {
        Concept::atom(n)
    }

    fn check_witness(c: &Concept, tbox: &StrictTBox) -> bool {
        let res = is_satisfiable(c, tbox);
        if let Some(w) = &res.witness {
            assert!(w.holds_at(0, c), "witness does not satisfy {c}");
            for ax in &tbox.axioms {
                assert!(w.satisfies(ax), "witness violates {} => {}", ax.lhs, ax.rhs);
            }
        }
        res.satisfiable
    }

    #[test]
    fn contradiction() {
        let c = Concept::and(atom("A"), Concept::not(atom("A")));
        assert!(!check_witness(&c, &StrictTBox::empty()));
    }

    #[test]
    fn exists_forall_clash() {
        let c = Concept::and(
            Concept::exists("R", atom("A")),
            Concept::forall("R", Concept::not(atom("A"))),
        );
        assert!(!check_witness(&c, &StrictTBox::empty()));
    }

    #[test]
    fn penguin_with_tbox() {
        let tbox = StrictTBox::new(vec![Inclusion::new(atom("Penguin"), atom("Bird"))]);
        assert!(check_witness(&atom("Penguin"), &tbox));
    }

    #[test]
    fn cyclic_tbox_terminates_by_blocking() {
        // every A has an A successor: needs a loop back to the root
        let tbox = StrictTBox::new(vec![Inclusion::new(
            atom("A"),
            Concept::exists("R", atom("A")),
        )]);
        assert!(check_witness(&atom("A"), &tbox));
        let tbox = tbox.with(Inclusion::new(
            Concept::Top,
            Concept::forall("R", Concept::not(atom("A"))),
        ));
        assert!(!check_witness(&atom("A"), &tbox));
    }

    #[test]
    fn entailment_examples() {
        let pb = StrictTBox::new(vec![Inclusion::new(atom("Penguin"), atom("Bird"))]);
        assert!(entails_strict(&pb, &atom("Penguin"), &atom("Bird")));
        assert!(!entails_strict(
            &StrictTBox::empty(),
            &atom("A"),
            &atom("B")
        ));
        let chain = StrictTBox::new(vec![
            Inclusion::new(atom("A"), atom("B")),
            Inclusion::new(atom("B"), atom("C")),
        ]);
        assert!(entails_strict(&chain, &atom("A"), &atom("C")));
    }

    #[test]
    fn consistent_sets() {
        let a = atom("A");
        let not_a = Concept::not(atom("A"));
        assert!(!is_consistent_set([&a, &not_a], &StrictTBox::empty()));
        let pb = StrictTBox::new(vec![Inclusion::new(atom("Penguin"), atom("Bird"))]);
        assert!(is_consistent_set(
            [&atom("Penguin"), &Concept::not(atom("Fly"))],
            &pb
        ));
        assert!(is_consistent_set(std::iter::empty(), &pb));
    }

    fn arb_concept() -> impl Strategy<Value = Concept> {
        let leaf = prop_oneof![
            Just(Concept::Top),
            Just(Concept::Bottom),
            prop::sample::select(vec!["A", "B", "C"]).prop_map(Concept::atom),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Concept::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Concept::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Concept::or(a, b)),
                inner.clone().prop_map(|c| Concept::exists("R", c)),
                inner.prop_map(|c| Concept::forall("R", c)),
            ]
        })
    }

    proptest! {
        #[test]
        fn witnesses_check_out(c in arb_concept()) {
            check_witness(&c, &StrictTBox::empty());
        }

        #[test]
        fn subsumption_is_reflexive(c in arb_concept()) {
            prop_assert!(entails_strict(&StrictTBox::empty(), &c, &c));
        }

        #[test]
        fn adding_axioms_is_monotone(c in arb_concept(), d in arb_concept(), e in arb_concept()) {
            let small = StrictTBox::new(vec![Inclusion::new(atom("A"), d.clone())]);
            let big = small.with(Inclusion::new(e, atom("B")));
            if entails_strict(&small, &c, &d) {
                prop_assert!(entails_strict(&big, &c, &d));
            }
        }

        #[test]
        fn subsumption_is_transitive(a in arb_concept(), b in arb_concept(), c in arb_concept()) {
            let tbox = StrictTBox::new(vec![Inclusion::new(atom("A"), atom("B"))]);
            if entails_strict(&tbox, &a, &b) && entails_strict(&tbox, &b, &c) {
                prop_assert!(entails_strict(&tbox, &a, &c));
            }
        }
    }
}
