//! Golden tests for the command-line binary: exit codes, stdout documents,
//! stderr diagnostics, and byte stability of structured output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use igroupoid::constructions::{band_compose, group_table};
use igroupoid::fixtures::{cyclic_cayley, example_3};
use igroupoid::format::{structure_from_json, table_to_json};
use igroupoid::oracle::derive_table;
use igroupoid::validate::validate_table;

fn igt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igt"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Materialize the bundled fixtures into a scratch directory.
fn fixture_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = igt(dir.path(), &["fixtures", "--write-all", "--dir", "."]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    dir
}

#[test]
fn fixtures_list_names_the_bundled_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = igt(dir.path(), &["fixtures", "--list"]);
    assert_eq!(code(&out), 0);
    let listing = stdout(&out);
    for name in [
        "example-3",
        "example-4",
        "example-5",
        "example-6",
        "line-graph",
        "z-successor",
        "thm52-z2",
    ] {
        assert!(listing.contains(name), "missing {name} in listing");
    }
}

#[test]
fn validate_passes_and_fails_with_matching_exit_codes() {
    let dir = fixture_dir();
    let out = igt(dir.path(), &["validate", "example-6.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).ends_with("result: pass\n"));

    // Declared inverse 2 for label 1, but 0 never appears in 1*2.
    let bad = r#"{
  "labels": [
    {"id": "0", "sign": "zero"},
    {"id": "1", "sign": "pos", "inverse": "2"},
    {"id": "2", "sign": "pos", "inverse": "1"}
  ],
  "products": [
    {"left": "0", "right": "0", "result": ["0"]},
    {"left": "0", "right": "1", "result": ["1"]},
    {"left": "0", "right": "2", "result": ["2"]},
    {"left": "1", "right": "0", "result": ["1"]},
    {"left": "2", "right": "0", "result": ["2"]},
    {"left": "1", "right": "1", "result": ["1"]},
    {"left": "2", "right": "2", "result": ["2"]},
    {"left": "1", "right": "2", "result": ["1"]},
    {"left": "2", "right": "1", "result": ["0", "1", "2"]}
  ]
}"#;
    fs::write(dir.path().join("bad.json"), bad).unwrap();
    let out = igt(dir.path(), &["validate", "bad.json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).ends_with("result: fail\n"));

    let out = igt(dir.path(), &["validate", "no-such-file.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("no-such-file.json"));
}

#[test]
fn power_follows_the_double_dash_contract() {
    let dir = fixture_dir();
    let out = igt(dir.path(), &["power", "example-5.json", "--", "-1", "-2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "{-1}\n");

    let out = igt(dir.path(), &["power", "example-5.json", "--", "-2", "-2"]);
    assert_eq!(stdout(&out), "{-2}\n");

    // Window overflow is a queried failure, not a load error.
    let out = igt(dir.path(), &["power", "omega-star.json", "--", "-4", "-5"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("window"));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let dir = fixture_dir();
    for args in [
        vec!["--format", "json", "validate", "example-4.json"],
        vec!["--format", "json", "analyze", "example-3.json"],
        vec!["--format", "json", "fixtures", "--list"],
        vec!["--format", "json", "analyze", "example-3.json", "--sweep", "20", "--seed", "9"],
    ] {
        let first = igt(dir.path(), &args);
        let second = igt(dir.path(), &args);
        assert_eq!(code(&first), 0, "{}", stderr(&first));
        assert_eq!(first.stdout, second.stdout, "unstable output for {args:?}");
        serde_json::from_slice::<serde_json::Value>(&first.stdout).expect("well-formed json");
    }
}

#[test]
fn gen_derive_diff_round_trip() {
    let dir = fixture_dir();
    let out = igt(
        dir.path(),
        &["gen", "chain", "--params", "n=10", "-o", "chain.json"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = igt(dir.path(), &["derive", "chain.json", "-o", "derived.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = igt(dir.path(), &["diff", "chain.json", "example-6.json"]);
    assert_eq!(code(&out), 0, "diff: {}", stdout(&out));
    assert_eq!(stdout(&out), "derived table matches expected table\n");

    // The derived document re-validated through the CLI agrees byte for
    // byte with validating the in-process derivation.
    let out = igt(dir.path(), &["--format", "json", "validate", "derived.json"]);
    assert_eq!(code(&out), 0);
    let structure =
        structure_from_json(&fs::read_to_string(dir.path().join("chain.json")).unwrap()).unwrap();
    let report = validate_table(&derive_table(&structure).unwrap());
    let value = serde_json::to_value(&report).unwrap();
    let mut expected = serde_json::to_string_pretty(&value).unwrap();
    expected.push('\n');
    assert_eq!(stdout(&out), expected);

    // A corrupted expectation is a witness, exit 1.
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("example-6.json")).unwrap())
            .unwrap();
    let cell = doc["products"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|p| p["left"] == "1" && p["right"] == "1")
        .unwrap();
    cell["result"] = serde_json::json!(["2"]);
    fs::write(
        dir.path().join("tampered.json"),
        serde_json::to_string(&doc).unwrap(),
    )
    .unwrap();
    let out = igt(dir.path(), &["diff", "chain.json", "tampered.json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("cells differ"));
}

#[test]
fn compose_band_matches_the_bundled_band() {
    let dir = fixture_dir();
    let z2 = group_table(&cyclic_cayley(2)).unwrap();
    fs::write(dir.path().join("z2.json"), table_to_json(&z2)).unwrap();
    let out = igt(
        dir.path(),
        &["compose", "band", "example-3.json", "z2.json", "-o", "band.json"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let built = fs::read(dir.path().join("band.json")).unwrap();
    let bundled = fs::read(dir.path().join("thm52-z2.json")).unwrap();
    assert_eq!(built, bundled);

    let expected = band_compose(&example_3(), &z2).unwrap();
    assert_eq!(built, table_to_json(&expected).into_bytes());
}

#[test]
fn join_specs_build_typed_tables_that_validate() {
    let dir = fixture_dir();
    let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/minimal-join.json");
    let out = igt(dir.path(), &["join", spec, "-o", "joined.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = igt(dir.path(), &["validate", "--typed", "joined.json"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).ends_with("result: pass\n"));
}

#[test]
fn export_dot_emits_a_hasse_diagram() {
    let dir = fixture_dir();
    let out = igt(dir.path(), &["export-dot", "example-6.json", "--lattice"]);
    assert_eq!(code(&out), 0);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("->"));

    let out = igt(dir.path(), &["export-dot", "example-6.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tree_derivation_notes_fire_only_for_branching() {
    let dir = tempfile::tempdir().unwrap();
    let gen = |degree: &str, out_name: &str| {
        let params = format!("degree={degree},radius=8,max-label=4");
        let out = igt(
            dir.path(),
            &["gen", "tree", "--params", &params, "-o", out_name],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    };
    gen("3", "tree3.json");
    gen("2", "tree2.json");

    let out = igt(dir.path(), &["derive", "tree3.json", "-o", "t3.json"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("2*2 = {0,2,4} strictly contains {0,4}"));

    let out = igt(dir.path(), &["derive", "tree2.json", "-o", "t2.json"]);
    assert_eq!(code(&out), 0);
    assert!(!stderr(&out).contains("strictly contains"));
}

#[test]
fn window_flag_regenerates_rule_backed_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = igt(dir.path(), &["fixtures", "line-graph", "--window", "7"]);
    assert_eq!(code(&out), 0);
    let doc = stdout(&out);
    assert!(doc.contains("\"window\": 7"));
    let path = dir.path().join("lg7.json");
    fs::write(&path, &doc).unwrap();
    let out = igt(dir.path(), &["power", "lg7.json", "--", "3", "4"]);
    assert_eq!(stdout(&out), "{1,7}\n");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = igt(dir.path(), &["gen", "chain", "--params", "n=ten"]);
    assert_eq!(code(&out), 2);
    let out = igt(dir.path(), &["gen", "cayley", "--params", "group=z0"]);
    assert_eq!(code(&out), 2);
    let out = igt(dir.path(), &["frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn repo_fixture_files_match_the_generators() {
    // The checked-in fixture documents are exactly what write-all emits.
    let repo: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures"]
        .iter()
        .collect();
    let dir = fixture_dir();
    for name in igroupoid::fixtures::FIXTURE_NAMES {
        let bundled = fs::read(dir.path().join(format!("{name}.json"))).unwrap();
        let checked_in = fs::read(repo.join(format!("{name}.json")))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(bundled, checked_in, "stale checked-in fixture {name}");
    }
}
