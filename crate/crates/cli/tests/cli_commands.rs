use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use trialonto_core::coverage_opt::check_curve;
use trialonto_core::ontology::parse_owl;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trialonto")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn build(dir: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.join("o.owl");
    let corpus = fixture("corpus.jsonl");
    let lexicon = fixture("lexicon.tsv");
    let scaffold = fixture("scaffold.toml");
    let mut args = vec![
        "build",
        "--corpus",
        &corpus,
        "--lexicon",
        &lexicon,
        "--scaffold",
        &scaffold,
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("o.manifest.json")).unwrap()).unwrap()
}

#[test]
fn missing_input_is_an_input_error() {
    let o = run(&[
        "build",
        "--corpus",
        "/nonexistent/corpus.jsonl",
        "--lexicon",
        &fixture("lexicon.tsv"),
        "--scaffold",
        &fixture("scaffold.toml"),
        "--out",
        "/tmp/never.owl",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: stage ingest:"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["build"]).status.code(), Some(1));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["optimize", "--series", "/nonexistent.csv"]).status.code(), Some(2));
}

#[test]
fn zero_seed_size_has_zero_baseline() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), &["--seed-size", "0"]);
    let m = manifest(dir.path());
    assert_eq!(m["coverage"]["baseline"], "0.0000");
    assert_eq!(m["counts"]["seeded"], 0);
}

#[test]
fn report_is_consistent_and_curve_reparses() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), &["--seed-size", "2"]);
    let mpath = dir.path().join("o.manifest.json");
    let o = run(&["report", "--manifest", mpath.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("[consistent]"), "{text}");
    assert!(text.contains("sha256 matches manifest"), "{text}");

    let o = run(&["report", "--manifest", mpath.to_str().unwrap(), "--curve"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let gains: Vec<f64> = rows[1..].iter().map(|r| r[4].parse().unwrap()).collect();
    let cumulative: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    check_curve(cumulative[0], gains.iter().copied().zip(cumulative[1..].iter().copied())).unwrap();
    assert_eq!(rows.len() - 1, manifest(dir.path())["series_length"].as_u64().unwrap() as usize);
}

#[test]
fn scaffold_only_report_counts_subclass_axioms() {
    let dir = tempfile::tempdir().unwrap();
    // an empty corpus leaves exactly the scaffold
    let corpus = dir.path().join("empty.jsonl");
    std::fs::write(&corpus, "").unwrap();
    let out = dir.path().join("o.owl");
    let o = run(&[
        "build",
        "--corpus",
        corpus.to_str().unwrap(),
        "--lexicon",
        &fixture("lexicon.tsv"),
        "--scaffold",
        &fixture("scaffold.toml"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let owl = std::fs::read_to_string(&out).unwrap();
    let subclass = owl.lines().filter(|l| l.starts_with("SubClassOf(")).count();
    let m = manifest(dir.path());
    assert_eq!(m["stats"]["logical_axiom_count"].as_u64().unwrap() as usize, subclass);
    assert_eq!(m["stats"]["class_count"], 50);
    let report = stdout(&run(&["report", "--manifest", dir.path().join("o.manifest.json").to_str().unwrap()]));
    assert!(report.contains(&format!("logical axioms: {subclass}")), "{report}");
}

#[test]
fn corrupt_manifest_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    build(dir.path(), &[]);
    let mpath = dir.path().join("o.manifest.json");
    let text = std::fs::read_to_string(&mpath).unwrap();
    std::fs::write(&mpath, &text[..text.len() / 2]).unwrap();
    let o = run(&["report", "--manifest", mpath.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("stage report"), "{}", stderr(&o));

    let mut m: serde_json::Value = serde_json::from_str(&text).unwrap();
    m["coverage"]["final"] = "1.5000".into();
    std::fs::write(&mpath, m.to_string()).unwrap();
    assert_ne!(run(&["report", "--manifest", mpath.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn optimize_reads_the_frozen_curve() {
    let curve = fixture("expected/fixture.curve.csv");
    let o = run(&["optimize", "--series", &curve]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("p: 3"), "{text}");
    let o = run(&["optimize", "--series", &curve, "--classes", "3", "--cluster-on", "cumulative"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn coverage_of_frozen_ontology_matches_manifest_final() {
    let o = run(&[
        "coverage",
        "--ontology",
        &fixture("expected/fixture.owl"),
        "--corpus",
        &fixture("corpus.jsonl"),
        "--lexicon",
        &fixture("lexicon.tsv"),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let expected: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("expected/expected.json")).unwrap()).unwrap();
    let text = stdout(&o);
    assert!(text.contains(expected["coverage"]["final"].as_str().unwrap()), "{text}");
}

#[test]
fn export_formats() {
    let owl_path = fixture("expected/fixture.owl");
    let owl = std::fs::read_to_string(&owl_path).unwrap();
    let ontology = parse_owl(&owl).unwrap();

    let o = run(&["export", "--ontology", &owl_path, "--format", "owl"]);
    assert_eq!(stdout(&o), owl);

    let o = run(&["export", "--ontology", &owl_path, "--format", "tsv"]);
    let tsv = stdout(&o);
    assert_eq!(tsv.lines().count(), ontology.len() + 1);
    assert!(tsv.lines().skip(1).all(|l| l.split('\t').count() == 6));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.json");
    let o = run(&["export", "--ontology", &owl_path, "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v.to_string().contains("AlzheimersDisease"));
}

#[test]
fn normalize_unknown_term_is_an_input_error() {
    let o = run(&[
        "normalize",
        "--term",
        "xyzzy",
        "--ontology",
        &fixture("expected/fixture.owl"),
        "--lexicon",
        &fixture("lexicon.tsv"),
        "--valuesets",
        &fixture("valuesets.tsv"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("stage normalize"), "{}", stderr(&o));
}

#[test]
fn repeated_builds_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let extra = ["--cut", "per-category", "--disable-enrichment", "none", "--seed-size", "1"];
    let oa = build(a.path(), &extra);
    let ob = build(b.path(), &extra);
    assert_eq!(std::fs::read(oa).unwrap(), std::fs::read(ob).unwrap());
    let mut ma = manifest(a.path());
    let mut mb = manifest(b.path());
    ma["timestamp"] = serde_json::Value::Null;
    mb["timestamp"] = serde_json::Value::Null;
    assert_eq!(ma, mb);
    assert_eq!(ma["config"]["cut"], "per-category");
    assert_eq!(ma["config"]["enrichment_disabled"], serde_json::json!([]));
}
