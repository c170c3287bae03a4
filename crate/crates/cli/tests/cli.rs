use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], bound: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_typika"));
    cmd.args(args).env_remove("TYPIKA_RANK_BOUND");
    if let Some(b) = bound {
        cmd.env("TYPIKA_RANK_BOUND", b);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::File::create(&path)
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["check", &corpus("penguins.kb")])), 0);
    let bad = file(dir.path(), "bad.kb", "top => A\ntop => not A\n");
    let out = run(&["check", "--json", &bad]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["consistent"], false);
    let missing = dir.path().join("nope.kb");
    let out = run(&["check", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn check_with_abox() {
    let dir = tempfile::tempdir().unwrap();
    let ok = file(
        dir.path(),
        "ok.kb",
        "Penguin => Bird\nT(Bird) => Fly\nPenguin(tweety)\nR(tweety, pingu)\n",
    );
    assert_eq!(code(&run(&["check", &ok])), 0);
    let bad = file(
        dir.path(),
        "bad.kb",
        "Penguin => not Fly\nPenguin(tweety)\nFly(tweety)\n",
    );
    assert_eq!(code(&run(&["check", &bad])), 1);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = file(dir.path(), "bad.kb", "T(Bird) =>\n");
    let out = run(&["rank", &bad]);
    assert_eq!(code(&out), 2);
    let kb = corpus("penguins.kb");
    assert_eq!(
        code(&run(&["query", "--semantics", "rc", &kb, "T(Bird =>"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "query",
            "--semantics",
            "bogus",
            &kb,
            "Bird => Bird"
        ])),
        2
    );
}

#[test]
fn rank_without_defeasible_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let kb = file(dir.path(), "strict.kb", "Penguin => Bird\n");
    let out = run(&["rank", "--json", &kb]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["ranks"]["levels"].as_array().unwrap().len(), 1);
    assert_eq!(doc["ranks"]["concepts"][0]["concept"], "Penguin");
    assert_eq!(doc["ranks"]["concepts"][0]["rank"], 0);
    assert_eq!(doc["ranks"]["axioms"][0]["level"], Value::Null);
}

#[test]
fn rank_reports_levels() {
    let out = run(&["rank", "--json", &corpus("penguins.kb")]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let concepts = doc["ranks"]["concepts"].as_array().unwrap();
    let rank = |c: &str| concepts.iter().find(|r| r["concept"] == c).unwrap()["rank"].clone();
    assert_eq!(rank("Bird"), 0);
    assert_eq!(rank("Penguin"), 1);
    assert!(doc["timingMs"].is_null());
}

#[test]
fn rank_bound_env_and_flag() {
    let kb = corpus("penguins.kb");
    let q = "T(Penguin) => HasNiceFeather";
    let base = ["query", "--semantics", "enriched"];
    let with = |extra: &[&'static str]| -> Vec<String> {
        base.iter()
            .chain(extra)
            .map(|s| s.to_string())
            .chain([kb.clone(), q.to_string()])
            .collect()
    };
    let run_env = |args: Vec<String>, bound| {
        run_env(&args.iter().map(String::as_str).collect::<Vec<_>>(), bound)
    };
    let run = |args: Vec<String>| run_env(args, None);
    // minimal models of the penguin KB need rank 2
    assert_eq!(code(&run_env(with(&[]), Some("1"))), 2);
    assert_eq!(code(&run_env(with(&["--rank-bound", "4"]), Some("1"))), 0);
    assert_eq!(code(&run_env(with(&[]), Some("4"))), 0);
    let out = run(with(&["--rank-bound", "1"]));
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank"));
}

#[test]
fn query_json_shape() {
    let out = run(&[
        "query",
        "--semantics",
        "enriched",
        "--json",
        "--timing",
        &corpus("penguins.kb"),
        "T(Penguin) => Fly",
    ]);
    assert_eq!(code(&out), 1);
    let doc = json(&out);
    assert_eq!(doc["command"], "query");
    assert_eq!(doc["semantics"], "enriched");
    assert_eq!(doc["entailed"], false);
    assert!(doc["timingMs"].is_number());
    assert!(doc.get("witness").is_none());
}

#[test]
fn emitted_countermodel_refutes_query() {
    let out = run(&[
        "query",
        "--semantics",
        "enriched",
        "--emit-model",
        "--json",
        &corpus("penguins.kb"),
        "T(Penguin) => Fly",
    ]);
    assert_eq!(code(&out), 1);
    let w = &json(&out)["witness"];
    let domain = w["domain"].as_array().unwrap();
    let global = w["globalRanks"].as_object().unwrap();
    assert_eq!(global.len(), domain.len());
    assert!(w["aspectRanks"].as_object().unwrap().contains_key("Fly"));
    assert!(w["roleEdges"].is_object());
    let has = |e: &Value, c: &str| e["concepts"].as_array().unwrap().iter().any(|x| x == c);
    let penguins: Vec<&Value> = domain.iter().filter(|e| has(e, "Penguin")).collect();
    let least = penguins
        .iter()
        .map(|e| global[e["id"].as_str().unwrap()].as_u64().unwrap())
        .min()
        .unwrap();
    assert!(penguins
        .iter()
        .filter(|e| global[e["id"].as_str().unwrap()].as_u64().unwrap() == least)
        .all(|e| has(e, "not Fly")));
}

#[test]
fn single_pref_and_rc_emit_models() {
    for sem in ["rc", "single-pref"] {
        let out = run(&[
            "query",
            "--semantics",
            sem,
            "--emit-model",
            "--json",
            &corpus("penguins.kb"),
            "T(Penguin) => HasNiceFeather",
        ]);
        assert_eq!(code(&out), 1, "{sem}");
        let w = &json(&out)["witness"];
        assert!(w["aspectRanks"].as_object().unwrap().is_empty());
        assert!(!w["globalRanks"].as_object().unwrap().is_empty());
    }
}

#[test]
fn text_output() {
    let out = run(&[
        "query",
        "--semantics",
        "rc",
        &corpus("penguins.kb"),
        "T(Penguin) => not Fly",
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("entailed"));
}

#[test]
fn compare_empty_query_file() {
    let dir = tempfile::tempdir().unwrap();
    let q = file(dir.path(), "empty.queries", "# nothing here\n\n");
    let out = run(&["compare", "--json", &corpus("penguins.kb"), &q]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 0);
    assert_eq!(doc["summary"]["queries"], 0);
}

#[test]
fn compare_isolates_row_errors() {
    let dir = tempfile::tempdir().unwrap();
    let q = file(
        dir.path(),
        "mixed.queries",
        "T(Penguin) => HasNiceFeather\nT(Penguin =>\nT(Bird) => Fly\n",
    );
    let out = run(&["compare", "--json", &corpus("penguins.kb"), &q]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["strengthening"], true);
    assert_eq!(rows[0]["rc"], false);
    assert_eq!(rows[0]["enriched"], true);
    assert!(rows[1]["error"].is_string());
    assert_eq!(rows[1]["line"], 2);
    assert_eq!(rows[2]["rc"], true);
    assert_eq!(doc["summary"]["errors"], 1);
    assert_eq!(doc["summary"]["failures"], 0);
    assert_eq!(doc["summary"]["strengthenings"], 1);
}

#[test]
fn compare_rejects_inconsistent_kb() {
    let dir = tempfile::tempdir().unwrap();
    let kb = file(dir.path(), "bad.kb", "top => A\ntop => not A\n");
    let q = file(dir.path(), "q", "A => A\n");
    assert_eq!(code(&run(&["compare", &kb, &q])), 2);
}

#[test]
fn compare_text_summary() {
    let out = run(&[
        "compare",
        &corpus("students.kb"),
        &corpus("students.queries"),
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().last().unwrap().contains("failures"));
}
