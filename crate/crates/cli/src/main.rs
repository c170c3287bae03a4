mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use typika::semantics::entail::{
    enriched_verdict, minimal_models_on, query_domain, rc_verdict, single_pref_minimal_model,
    single_pref_verdict,
};
use typika::{
    default_rank_bound, parse_axiom, parse_kb, parse_queries, Axiom, CouplingMode, EnrichedSearch,
    KnowledgeBase, MinimalModels, RationalClosure, Semantics, SemanticsError, Verdict, Witness,
};

use report::{AxiomLevel, ConceptRank, RankReport, Report, Row, Summary};

#[derive(Parser)]
#[command(
    name = "typika",
    version,
    about = "Defeasible reasoning for ALC with typicality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether a knowledge base is consistent.
    Check {
        kb: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Print the exceptionality levels and the rank of each antecedent.
    Rank {
        kb: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Answer a query under one semantics.
    Query {
        #[arg(long, value_enum)]
        semantics: SemanticsArg,
        #[command(flatten)]
        search: SearchArgs,
        /// Include a model in the output: a countermodel when the query is
        /// not entailed, otherwise a minimal model.
        #[arg(long)]
        emit_model: bool,
        #[command(flatten)]
        out: Output,
        kb: PathBuf,
        /// A single axiom, e.g. "T(Penguin) => not Fly".
        query: String,
    },
    /// Answer every query of a file under all semantics and check that
    /// rational closure is contained in the enriched semantics.
    Compare {
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        out: Output,
        kb: PathBuf,
        queries: PathBuf,
    },
}

#[derive(Args)]
struct Output {
    /// Print a JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Report wall-clock time.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Largest rank a minimal model may use [default: defeasible axioms + 1].
    #[arg(long, env = "TYPIKA_RANK_BOUND")]
    rank_bound: Option<u32>,
    /// How the global preference follows the aspect preferences.
    #[arg(long, value_enum, default_value_t = CouplingArg::Literal)]
    coupling: CouplingArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Rc,
    SinglePref,
    Enriched,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Rc => Semantics::RationalClosure,
            SemanticsArg::SinglePref => Semantics::SinglePreference,
            SemanticsArg::Enriched => Semantics::Enriched,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CouplingArg {
    /// Forced pairs must be ordered.
    Literal,
    /// Exactly the forced pairs are ordered.
    Iff,
}

impl SearchArgs {
    fn search(&self, kb: &KnowledgeBase) -> EnrichedSearch {
        let mut s = EnrichedSearch::new(self.rank_bound.unwrap_or_else(|| default_rank_bound(kb)));
        s.coupling = match self.coupling {
            CouplingArg::Literal => CouplingMode::Literal,
            CouplingArg::Iff => CouplingMode::Biconditional,
        };
        s
    }
}

struct Failure(String);

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check { kb, out } => check(&kb, &out),
        Command::Rank { kb, out } => rank(&kb, &out),
        Command::Query {
            semantics,
            search,
            emit_model,
            out,
            kb,
            query,
        } => query_cmd(&kb, &query, semantics.into(), &search, emit_model, &out),
        Command::Compare {
            search,
            out,
            kb,
            queries,
        } => compare(&kb, &queries, &search, &out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    parse_kb(&read(path)?).map_err(|e| Failure(format!("{}:{e}", path.display())))
}

fn emit(report: &Report, out: &Output, text: impl FnOnce() -> String) {
    if out.json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        );
    } else {
        print!("{}", text());
        if let Some(ms) = report.timing_ms {
            println!("time: {ms:.1} ms");
        }
    }
}

fn elapsed(start: Instant, out: &Output) -> Option<f64> {
    out.timing.then(|| start.elapsed().as_secs_f64() * 1000.0)
}

fn check(path: &Path, out: &Output) -> Result<u8, Failure> {
    let start = Instant::now();
    let kb = load_kb(path)?;
    let closure = RationalClosure::new(&kb);
    let mut consistent = closure.is_satisfiable(std::iter::empty());
    if consistent && !kb.abox.is_empty() {
        let domain = query_domain(
            &kb,
            &closure,
            &Axiom::strict(typika::Concept::Top, typika::Concept::Top),
        )?;
        consistent = single_pref_minimal_model(&kb, domain, u32::MAX).is_ok();
    }
    let report = Report {
        command: "check",
        kb: path.display().to_string(),
        consistent: Some(consistent),
        timing_ms: elapsed(start, out),
        ..Report::default()
    };
    emit(&report, out, || {
        format!(
            "{}\n",
            if consistent {
                "consistent"
            } else {
                "inconsistent"
            }
        )
    });
    Ok(if consistent { 0 } else { 1 })
}

fn rank(path: &Path, out: &Output) -> Result<u8, Failure> {
    let start = Instant::now();
    let kb = load_kb(path)?;
    let closure = RationalClosure::new(&kb);
    let ranked = closure.ranked();
    let mut axioms: Vec<AxiomLevel> = kb
        .strict
        .iter()
        .map(|i| AxiomLevel {
            axiom: Axiom::Strict(i.clone()).to_string(),
            level: None,
        })
        .collect();
    axioms.extend(kb.defeasible.iter().map(|i| AxiomLevel {
        axiom: Axiom::Defeasible(i.clone()).to_string(),
        level: ranked.deepest_level(i),
    }));
    let mut seen = std::collections::BTreeSet::new();
    let concepts: Vec<ConceptRank> = kb
        .axioms()
        .map(|a| a.inclusion().lhs.clone())
        .filter(|c| seen.insert(c.clone()))
        .map(|c| ConceptRank {
            concept: c.to_string(),
            rank: report::rank_value(closure.rank(&c)),
        })
        .collect();
    let levels: Vec<Vec<String>> = ranked
        .levels()
        .iter()
        .map(|l| {
            l.iter()
                .map(|i| Axiom::Defeasible(i.clone()).to_string())
                .collect()
        })
        .collect();
    let report = Report {
        command: "rank",
        kb: path.display().to_string(),
        ranks: Some(RankReport {
            levels,
            fixpoint: ranked.fixpoint_index(),
            axioms,
            concepts,
        }),
        timing_ms: elapsed(start, out),
        ..Report::default()
    };
    emit(&report, out, || {
        let r = report.ranks.as_ref().expect("rank report");
        let mut s = String::new();
        for (i, level) in r.levels.iter().enumerate() {
            s += &format!(
                "E{i}: {}\n",
                if level.is_empty() {
                    "-".into()
                } else {
                    level.join("; ")
                }
            );
        }
        s += "rank  concept\n";
        for c in &r.concepts {
            let v = match &c.rank {
                serde_json::Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            s += &format!("{v:<5} {}\n", c.concept);
        }
        s
    });
    Ok(0)
}

fn answer(
    kb: &KnowledgeBase,
    closure: &RationalClosure,
    query: &Axiom,
    semantics: Semantics,
    search: &EnrichedSearch,
    want_model: bool,
) -> Result<Verdict, SemanticsError> {
    let domain = query_domain(kb, closure, query)?;
    match semantics {
        Semantics::RationalClosure => {
            let mut v = rc_verdict(closure, query);
            if want_model {
                let m = single_pref_minimal_model(kb, domain, u32::MAX)?;
                v.witness = Some(Witness::Single(m));
            }
            Ok(v)
        }
        Semantics::SinglePreference => Ok(single_pref_verdict(
            single_pref_minimal_model(kb, domain, search.rank_bound)?,
            query,
        )),
        Semantics::Enriched => Ok(enriched_verdict(
            &minimal_models_on(kb, domain, search)?,
            query,
        )),
    }
}

fn query_cmd(
    path: &Path,
    text: &str,
    semantics: Semantics,
    args: &SearchArgs,
    emit_model: bool,
    out: &Output,
) -> Result<u8, Failure> {
    let start = Instant::now();
    let kb = load_kb(path)?;
    let query = parse_axiom(text).map_err(|e| Failure(format!("query:{e}")))?;
    let closure = RationalClosure::new(&kb);
    let search = args.search(&kb);
    let verdict = answer(&kb, &closure, &query, semantics, &search, emit_model)?;
    let witness = if emit_model {
        verdict.witness.as_ref()
    } else {
        None
    };
    let report = Report {
        command: "query",
        kb: path.display().to_string(),
        query: Some(query.to_string()),
        semantics: Some(semantics.to_string()),
        entailed: Some(verdict.entailed),
        witness: witness.map(report::witness_doc),
        timing_ms: elapsed(start, out),
        ..Report::default()
    };
    emit(&report, out, || {
        let mut s = format!(
            "{}: {} ({})\n",
            semantics,
            if verdict.entailed {
                "entailed"
            } else {
                "not entailed"
            },
            query
        );
        if let Some(w) = witness {
            s += if verdict.entailed {
                "minimal model:\n"
            } else {
                "countermodel:\n"
            };
            s += &report::witness_table(w);
        }
        s
    });
    Ok(if verdict.entailed { 0 } else { 1 })
}

fn compare(path: &Path, queries: &Path, args: &SearchArgs, out: &Output) -> Result<u8, Failure> {
    let start = Instant::now();
    let kb = load_kb(path)?;
    let queries_text = read(queries)?;
    let closure = RationalClosure::new(&kb);
    if !closure.is_satisfiable(std::iter::empty()) {
        return Err(SemanticsError::InconsistentKb.into());
    }
    let search = args.search(&kb);
    // minimal models depend on the query only through the domain
    let mut cache: BTreeMap<Vec<String>, Result<Arc<MinimalModels>, SemanticsError>> =
        BTreeMap::new();
    let mut rows = Vec::new();
    let mut summary = Summary::default();
    for (line, source, parsed) in parse_queries(&queries_text) {
        summary.queries += 1;
        let outcome = parsed.map_err(|e| e.to_string()).and_then(|q| {
            compare_row(&kb, &closure, &q, &search, &mut cache).map_err(|e| e.to_string())
        });
        let row = match outcome {
            Ok((rc, single, enriched)) => Row {
                line,
                query: source,
                rc: Some(rc),
                single_pref: Some(single),
                enriched: Some(enriched),
                strengthening: enriched && !rc,
                failure: rc && !enriched,
                oracle_mismatch: rc != single,
                error: None,
            },
            Err(e) => Row {
                line,
                query: source,
                rc: None,
                single_pref: None,
                enriched: None,
                strengthening: false,
                failure: false,
                oracle_mismatch: false,
                error: Some(e),
            },
        };
        summary.errors += usize::from(row.error.is_some());
        summary.rc_entailed += usize::from(row.rc == Some(true));
        summary.enriched_entailed += usize::from(row.enriched == Some(true));
        summary.strengthenings += usize::from(row.strengthening);
        summary.failures += usize::from(row.failure);
        summary.oracle_mismatches += usize::from(row.oracle_mismatch);
        rows.push(row);
    }
    let failed = summary.failures > 0;
    let report = Report {
        command: "compare",
        kb: path.display().to_string(),
        rows: Some(rows),
        summary: Some(summary),
        timing_ms: elapsed(start, out),
        ..Report::default()
    };
    emit(&report, out, || compare_table(&report));
    Ok(u8::from(failed))
}

fn compare_row(
    kb: &KnowledgeBase,
    closure: &RationalClosure,
    query: &Axiom,
    search: &EnrichedSearch,
    cache: &mut BTreeMap<Vec<String>, Result<Arc<MinimalModels>, SemanticsError>>,
) -> Result<(bool, bool, bool), SemanticsError> {
    let domain = query_domain(kb, closure, query)?;
    let rc = closure.entails(query);
    let single = single_pref_verdict(
        single_pref_minimal_model(kb, domain.clone(), search.rank_bound)?,
        query,
    )
    .entailed;
    let key: Vec<String> = domain.closure.iter().map(ToString::to_string).collect();
    let models = cache
        .entry(key)
        .or_insert_with(|| minimal_models_on(kb, domain, search).map(Arc::new))
        .clone()?;
    Ok((rc, single, models.entails(query)))
}

fn compare_table(report: &Report) -> String {
    let yn = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    };
    let mut s = format!(
        "{:<5} {:<4} {:<11} {:<9} query\n",
        "line", "rc", "single-pref", "enriched"
    );
    for r in report.rows.as_deref().unwrap_or_default() {
        let note = if let Some(e) = &r.error {
            format!("  ERROR: {e}")
        } else if r.failure {
            "  FAILURE".to_string()
        } else if r.strengthening {
            "  (strengthening)".to_string()
        } else {
            String::new()
        };
        s += &format!(
            "{:<5} {:<4} {:<11} {:<9} {}{}\n",
            r.line,
            yn(r.rc),
            yn(r.single_pref),
            yn(r.enriched),
            r.query,
            note
        );
    }
    if let Some(m) = &report.summary {
        s += &format!(
            "{} queries, {} errors, {} entailed by rc, {} entailed by enriched, {} strengthenings, {} failures\n",
            m.queries, m.errors, m.rc_entailed, m.enriched_entailed, m.strengthenings, m.failures
        );
    }
    s
}
