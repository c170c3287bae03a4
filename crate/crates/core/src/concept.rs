//! ALC concept expressions.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Concept and role names. Case-sensitive.
pub type Name = Arc<str>;

/// A T-free ALC concept.
///
/// Equality, ordering and hashing are structural; two concepts are "the same"
/// exactly when their trees coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Top,
    Bottom,
    Atom(Name),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Exists(Name, Box<Concept>),
    Forall(Name, Box<Concept>),
}

impl Concept {
    pub fn atom(name: &str) -> Self {
        Concept::Atom(Name::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(role: &str, c: Concept) -> Self {
        Concept::Exists(Name::from(role), Box::new(c))
    }

    pub fn forall(role: &str, c: Concept) -> Self {
        Concept::Forall(Name::from(role), Box::new(c))
    }

    /// Left-nested conjunction of `items`; `Top` when empty.
    pub fn conjunction<I: IntoIterator<Item = Concept>>(items: I) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Concept::Top,
            Some(first) => it.fold(first, Concept::and),
        }
    }

    /// Strips one negation, or adds one. `complement(complement(c)) == c`.
    pub fn complement(&self) -> Concept {
        match self {
            Concept::Not(inner) => (**inner).clone(),
            other => Concept::not(other.clone()),
        }
    }

    /// Every subexpression of `self`, including `self`.
    pub fn subconcepts(&self) -> BTreeSet<Concept> {
        let mut out = BTreeSet::new();
        self.collect_subconcepts(&mut out);
        out
    }

    pub(crate) fn collect_subconcepts(&self, out: &mut BTreeSet<Concept>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Concept::Top | Concept::Bottom | Concept::Atom(_) => {}
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) => {
                c.collect_subconcepts(out)
            }
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.collect_subconcepts(out);
                b.collect_subconcepts(out);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |c| {
            if let Concept::Atom(n) = c {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn roles(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |c| {
            if let Concept::Exists(r, _) | Concept::Forall(r, _) = c {
                out.insert(r.clone());
            }
        });
        out
    }

    /// Maximum nesting of role restrictions.
    pub fn role_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atom(_) => 0,
            Concept::Not(c) => c.role_depth(),
            Concept::And(a, b) | Concept::Or(a, b) => a.role_depth().max(b.role_depth()),
            Concept::Exists(_, c) | Concept::Forall(_, c) => 1 + c.role_depth(),
        }
    }

    fn visit<F: FnMut(&Concept)>(&self, f: &mut F) {
        f(self);
        match self {
            Concept::Top | Concept::Bottom | Concept::Atom(_) => {}
            Concept::Not(c) | Concept::Exists(_, c) | Concept::Forall(_, c) => c.visit(f),
            Concept::And(a, b) | Concept::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atom(_) => true,
            Concept::Not(c) => matches!(**c, Concept::Atom(_)),
            Concept::And(a, b) | Concept::Or(a, b) => a.is_nnf() && b.is_nnf(),
            Concept::Exists(_, c) | Concept::Forall(_, c) => c.is_nnf(),
        }
    }
}

/// Negation normal form: negation is pushed inward until it only sits on atoms.
pub fn to_nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atom(_) => c.clone(),
        Concept::And(a, b) => Concept::and(to_nnf(a), to_nnf(b)),
        Concept::Or(a, b) => Concept::or(to_nnf(a), to_nnf(b)),
        Concept::Exists(r, a) => Concept::Exists(r.clone(), Box::new(to_nnf(a))),
        Concept::Forall(r, a) => Concept::Forall(r.clone(), Box::new(to_nnf(a))),
        Concept::Not(inner) => negated_nnf(inner),
    }
}

fn negated_nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top => Concept::Bottom,
        Concept::Bottom => Concept::Top,
        Concept::Atom(_) => Concept::not(c.clone()),
        Concept::Not(inner) => to_nnf(inner),
        Concept::And(a, b) => Concept::or(negated_nnf(a), negated_nnf(b)),
        Concept::Or(a, b) => Concept::and(negated_nnf(a), negated_nnf(b)),
        Concept::Exists(r, a) => Concept::Forall(r.clone(), Box::new(negated_nnf(a))),
        Concept::Forall(r, a) => Concept::Exists(r.clone(), Box::new(negated_nnf(a))),
    }
}

/// Prints in the KB text syntax; the output parses back to the same tree.
impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Top => f.write_str("top"),
            Concept::Bottom => f.write_str("bot"),
            Concept::Atom(n) => f.write_str(n),
            Concept::Not(c) => write!(f, "not {c}"),
            Concept::And(a, b) => write!(f, "({a} and {b})"),
            Concept::Or(a, b) => write!(f, "({a} or {b})"),
            Concept::Exists(r, c) => write!(f, "exists {r}.{c}"),
            Concept::Forall(r, c) => write!(f, "forall {r}.{c}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Concept {
        Concept::atom("A")
    }
    fn b() -> Concept {
        Concept::atom("B")
    }

    #[test]
    fn nnf_de_morgan() {
        let c = Concept::not(Concept::and(a(), b()));
        assert_eq!(
            to_nnf(&c),
            Concept::or(Concept::not(a()), Concept::not(b()))
        );
    }

    #[test]
    fn nnf_modal_duality() {
        let c = Concept::not(Concept::exists("R", a()));
        assert_eq!(to_nnf(&c), Concept::forall("R", Concept::not(a())));
    }

    #[test]
    fn nnf_identity_on_atoms() {
        assert_eq!(to_nnf(&a()), a());
        assert_eq!(to_nnf(&Concept::not(Concept::not(a()))), a());
        assert_eq!(to_nnf(&Concept::not(Concept::Top)), Concept::Bottom);
    }

    #[test]
    fn complement_is_involutive() {
        let c = Concept::and(a(), Concept::not(b()));
        assert_eq!(c.complement().complement(), c);
        assert_eq!(Concept::not(a()).complement(), a());
    }

    #[test]
    fn display_uses_kb_syntax() {
        let c = Concept::exists("hasChild", Concept::or(a(), Concept::not(b())));
        assert_eq!(c.to_string(), "exists hasChild.(A or not B)");
    }

    #[test]
    fn conjunction_of_nothing_is_top() {
        assert_eq!(Concept::conjunction(Vec::new()), Concept::Top);
        assert_eq!(Concept::conjunction(vec![a(), b()]), Concept::and(a(), b()));
    }
}
