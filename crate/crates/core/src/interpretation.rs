//! Finite classical interpretations, used as tableau witnesses.

use std::collections::{BTreeMap, BTreeSet};

use crate::concept::{Concept, Name};
use crate::kb::Inclusion;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub size: usize,
    pub atoms: BTreeMap<Name, BTreeSet<usize>>,
    pub roles: BTreeMap<Name, BTreeSet<(usize, usize)>>,
}

impl Interpretation {
    pub fn extension(&self, c: &Concept) -> Vec<bool> {
        let n = self.size;
        match c {
            Concept::Top => vec![true; n],
            Concept::Bottom => vec![false; n],
            Concept::Atom(a) => {
                let mut v = vec![false; n];
                if let Some(xs) = self.atoms.get(a) {
                    for &x in xs {
                        v[x] = true;
                    }
                }
                v
            }
            Concept::Not(inner) => self.extension(inner).into_iter().map(|b| !b).collect(),
            Concept::And(a, b) => zip_with(self.extension(a), self.extension(b), |p, q| p && q),
            Concept::Or(a, b) => zip_with(self.extension(a), self.extension(b), |p, q| p || q),
            Concept::Exists(r, inner) => {
                let filler = self.extension(inner);
                let mut v = vec![false; n];
                for &(x, y) in self.roles.get(r).into_iter().flatten() {
                    if filler[y] {
                        v[x] = true;
                    }
                }
                v
            }
            Concept::Forall(r, inner) => {
                let filler = self.extension(inner);
                let mut v = vec![true; n];
                for &(x, y) in self.roles.get(r).into_iter().flatten() {
                    if !filler[y] {
                        v[x] = false;
                    }
                }
                v
            }
        }
    }

    pub fn holds_at(&self, x: usize, c: &Concept) -> bool {
        x < self.size && self.extension(c)[x]
    }

    pub fn satisfies(&self, inclusion: &Inclusion) -> bool {
        let lhs = self.extension(&inclusion.lhs);
        let rhs = self.extension(&inclusion.rhs);
        lhs.iter().zip(&rhs).all(|(l, r)| !l || *r)
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(p, q)| f(p, q)).collect()
}
