use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sheafpave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sheafpave")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn compute_m51_aggregate() {
    let o = sheafpave(&["compute", "M(5,1)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("Fixed locus: 1545 + 144*L + 6*L^2"));
}

#[test]
fn compute_m21_is_six_points() {
    let o = sheafpave(&["compute", "--space", "M( 2 , 1 )", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["spaces"][0]["poincare"], "6");
    assert!(doc.get("verification").is_none());
}

#[test]
fn normalizes_r_and_echoes_it() {
    let o = sheafpave(&["compute", "M(5,3)", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["spaces"][0]["space"], "M(5,2)");
    assert_eq!(doc["spaces"][0]["given_r"], 3);
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(code(&sheafpave(&["compute", "M(6,1)"])), 3);
    assert_eq!(code(&sheafpave(&["compute", "M(4,2)"])), 3);
    assert_eq!(code(&sheafpave(&["compute", "N(5,1)"])), 2);
    assert_eq!(code(&sheafpave(&["compute"])), 2);
    assert_eq!(code(&sheafpave(&["frobnicate"])), 2);
    assert_eq!(code(&sheafpave(&["inspect", "stratum", "Pi9", "--space", "M(5,1)"])), 2);
    assert_eq!(code(&sheafpave(&["inspect", "stratum", "Pi3"])), 2);
    assert_eq!(code(&sheafpave(&["inspect", "hilb", "99"])), 2);
    assert_eq!(code(&sheafpave(&["compute", "M(2,1)", "--threads", "0"])), 2);
}

#[test]
fn verify_all_passes() {
    let o = sheafpave(&["verify", "all", "--strict"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("Result: PASS"));
    assert!(text.contains("Betti numbers of the ambient moduli spaces are not reproduced"));
    for row in ["| M(4,1) | 186 | 6 | 0 | 192 | PASS |", "| M(5,1) | 1545 | 144 | 6 | 1695 | PASS |", "| M(5,2) | 1506 | 186 | 3 | 1695 | PASS |"] {
        assert!(text.contains(row), "{row}");
    }
}

#[test]
fn verify_m52_lists_xi2() {
    let o = sheafpave(&["verify", "M(5,2)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("Xi2: 522 points, 99 lines PASS"));
}

#[test]
fn corrupted_expected_table_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("expected.json");
    let mut table: Value = serde_json::from_str(sheafpave::strata::verify::EXPECTED_JSON).unwrap();
    let xi2 = table["spaces"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|s| s["space"] == "M(5,2)")
        .unwrap()["strata"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|s| s["id"] == "Xi2")
        .unwrap();
    xi2["cells"]["0"] = 523.into();
    std::fs::write(&path, table.to_string()).unwrap();
    let o = sheafpave(&["verify", "M(5,2)", "--expected", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("M(5,2) Xi2: 522 points, 99 lines FAIL (expected 523 points, 99 lines)"));
    assert!(text.contains("Result: FAIL"));

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(code(&sheafpave(&["verify", "--expected", path.to_str().unwrap()])), 2);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut docs = Vec::new();
    for threads in ["1", "4", "1"] {
        let out = dir.path().join(format!("doc{}.json", docs.len()));
        let wit = dir.path().join(format!("wit{}.jsonl", docs.len()));
        let o = sheafpave(&[
            "verify",
            "all",
            "--format",
            "json",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
            "--witnesses",
            wit.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        assert!(o.stdout.is_empty());
        let doc = std::fs::read_to_string(&out).unwrap().replace(wit.to_str().unwrap(), "WITNESSES");
        docs.push((doc, std::fs::read(&wit).unwrap()));
    }
    assert_eq!(docs[0], docs[1]);
    assert_eq!(docs[0], docs[2]);
    let witnesses = String::from_utf8(docs[0].1.clone()).unwrap();
    for line in witnesses.lines() {
        let w: Value = serde_json::from_str(line).unwrap();
        assert!(w["cells"].is_object());
    }
}

#[test]
fn inspect_listings() {
    let o = sheafpave(&["inspect", "hilb", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["listing"].as_array().unwrap().len(), 22);

    let o = sheafpave(&["inspect", "weights", "1", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows: Vec<(String, Value)> = doc["listing"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["monomial"].as_str().unwrap().to_string(), r["weight"].clone()))
        .collect();
    let expected = [("x", [0, 0]), ("y", [1, 0]), ("z", [0, 1])];
    assert_eq!(rows.len(), 3);
    for ((m, w), (em, ew)) in rows.iter().zip(expected) {
        assert_eq!(m, em);
        assert_eq!(*w, serde_json::json!(ew));
    }

    let o = sheafpave(&["inspect", "stratum", "Pi3", "--space", "M(5,1)", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["listing"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r["configuration"]["h"], serde_json::json!([0, 1, 0, 0, 0]));
    }
}

#[test]
fn csv_has_one_row_per_stratum() {
    let o = sheafpave(&["compute", "M(5,2)", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "space,stratum,description,points,lines,planes,euler,poincare");
    assert_eq!(lines.len(), 1 + 5 + 1);
    assert!(lines.last().unwrap().starts_with("\"M(5,2)\",total,,1506,186,3,1695,"));
}

/// Validates with the reference Python implementation of JSON Schema.
fn assert_valid(schema: &Path, doc: &Path) {
    let script = "import json, sys, jsonschema\n\
                  schema = json.load(open(sys.argv[1]))\n\
                  jsonschema.Draft202012Validator.check_schema(schema)\n\
                  jsonschema.validate(json.load(open(sys.argv[2])), schema, cls=jsonschema.Draft202012Validator)\n";
    let o = Command::new("python3")
        .args(["-c", script, schema.to_str().unwrap(), doc.to_str().unwrap()])
        .output()
        .expect("python3 with the jsonschema package is needed to validate against the shipped schema");
    assert!(o.status.success(), "{}: {}", doc.display(), String::from_utf8_lossy(&o.stderr));
}

#[test]
fn json_output_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let schema = dir.path().join("schema.json");
    std::fs::write(&schema, sheafpave_cli::SCHEMA_JSON).unwrap();
    let wit = dir.path().join("w.jsonl");
    let runs: [&[&str]; 5] = [
        &["compute", "M(5,1)", "--witnesses", wit.to_str().unwrap()],
        &["verify", "all", "--strict"],
        &["inspect", "hilb", "4"],
        &["inspect", "weights", "2"],
        &["inspect", "stratum", "Xi1", "--space", "M(5,2)"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let doc = dir.path().join(format!("doc{i}.json"));
        let mut full = args.to_vec();
        full.extend(["--format", "json", "--out", doc.to_str().unwrap()]);
        assert_eq!(code(&sheafpave(&full)), 0, "{args:?}");
        assert_valid(&schema, &doc);
    }
}
