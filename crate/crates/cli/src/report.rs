//! Structured output documents.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use typika::{CanonicalDomain, Rank, Witness};

#[derive(Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub command: &'static str,
    pub kb: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantics: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entailed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranks: Option<RankReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Row>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    /// Always present; null unless timing was requested.
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankReport {
    /// Defeasible axioms of each level, level 0 first.
    pub levels: Vec<Vec<String>>,
    pub fixpoint: usize,
    pub axioms: Vec<AxiomLevel>,
    pub concepts: Vec<ConceptRank>,
}

#[derive(Debug, Serialize)]
pub struct AxiomLevel {
    pub axiom: String,
    /// Deepest level containing the axiom; null for strict axioms, which
    /// belong to every level.
    pub level: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ConceptRank {
    pub concept: String,
    pub rank: Value,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Row {
    pub line: usize,
    pub query: String,
    pub rc: Option<bool>,
    pub single_pref: Option<bool>,
    pub enriched: Option<bool>,
    /// Entailed under the enriched semantics but not by rational closure.
    pub strengthening: bool,
    /// Entailed by rational closure but not under the enriched semantics.
    pub failure: bool,
    /// Rational closure and the single-preference models disagree.
    pub oracle_mismatch: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub queries: usize,
    pub errors: usize,
    pub rc_entailed: usize,
    pub enriched_entailed: usize,
    pub strengthenings: usize,
    pub failures: usize,
    pub oracle_mismatches: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessDoc {
    pub domain: Vec<ElementDoc>,
    pub role_edges: BTreeMap<String, Vec<[String; 2]>>,
    pub aspect_ranks: BTreeMap<String, BTreeMap<String, u32>>,
    pub global_ranks: BTreeMap<String, u32>,
}

#[derive(Debug, Serialize)]
pub struct ElementDoc {
    pub id: String,
    pub concepts: Vec<String>,
}

pub fn rank_value(r: Rank) -> Value {
    match r {
        Rank::Finite(n) => Value::from(n),
        Rank::Infinite => Value::from("inf"),
    }
}

fn id(x: usize) -> String {
    CanonicalDomain::element_name(x)
}

pub fn witness_doc(w: &Witness) -> WitnessDoc {
    let domain = w.domain();
    let ranks = |k: &typika::RankFn| -> BTreeMap<String, u32> {
        domain.elements().map(|x| (id(x), k.rank(x))).collect()
    };
    let aspect_ranks = match w {
        Witness::Single(_) => BTreeMap::new(),
        Witness::Enriched(m) => m
            .ranks
            .per_aspect
            .iter()
            .map(|(a, k)| (a.to_string(), ranks(k)))
            .collect(),
    };
    WitnessDoc {
        domain: domain
            .elements()
            .map(|x| ElementDoc {
                id: id(x),
                concepts: domain.types[x].iter().map(ToString::to_string).collect(),
            })
            .collect(),
        role_edges: domain
            .role_edges
            .iter()
            .map(|(r, edges)| {
                (
                    r.to_string(),
                    edges.iter().map(|&(x, y)| [id(x), id(y)]).collect(),
                )
            })
            .collect(),
        aspect_ranks,
        global_ranks: ranks(w.global()),
    }
}

/// Human-readable model table: one line per element with its global rank
/// and atomic literals.
pub fn witness_table(w: &Witness) -> String {
    use std::fmt::Write;
    let domain = w.domain();
    let mut out = String::new();
    for x in domain.elements() {
        let literals: Vec<String> = domain.types[x]
            .iter()
            .filter(|c| match c {
                typika::Concept::Atom(_) => true,
                typika::Concept::Not(inner) => matches!(**inner, typika::Concept::Atom(_)),
                _ => false,
            })
            .map(ToString::to_string)
            .collect();
        let _ = writeln!(
            out,
            "  {:<5} rank {:<3} {}",
            id(x),
            w.global().rank(x),
            literals.join(", ")
        );
    }
    out
}
