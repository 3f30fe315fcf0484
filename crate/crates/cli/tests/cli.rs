use std::process::{Command, Output};

use serde_json::Value;

fn srg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srg"))
        .args(args)
        .env_remove("SRG_CACHE")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn reflections_csv_matches_table() {
    let out = srg(&["tables", "reflections", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["group", "N", "minimal_d"]);
    let rows: Vec<Vec<String>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0], ["mu6T", "16", "39"]);
    assert_eq!(rows[16], ["OT12", "34", "38"]);
}

#[test]
fn open_cases_json_schema() {
    let out = srg(&["tables", "open", "--stage", "refined", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len() as u64, v["cases"].as_u64().unwrap());
    for item in items {
        for key in ["g0", "kind", "d", "status", "certificates"] {
            assert!(item.get(key).is_some(), "{key} missing in {item}");
        }
    }
    assert!(items.iter().any(|i| i["g0"] == "mu12I" && i["d"] == 144));
    let crude = json(&srg(&["tables", "open", "--stage", "crude"]));
    assert!(crude["cases"].as_u64() > v["cases"].as_u64());
}

#[test]
fn lemma_report_passes_for_mu18t() {
    let out = srg(&["verify", "lemmas", "--spec", "muT:18"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["totals"]["fail"], 0);
    assert!(v["items"].as_array().unwrap().len() >= 12);
}

#[test]
fn json_keys_are_sorted_and_output_is_deterministic() {
    let a = srg(&["verify", "subgroups", "--threads", "1"]);
    let b = srg(&["verify", "subgroups", "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0));
    let (mut v, mut w) = (json(&a), json(&b));
    assert_eq!(v["command"], "verify subgroups --threads 1");
    v["command"] = Value::Null;
    w["command"] = Value::Null;
    assert!(v == w, "reports differ across thread counts");
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(v["totals"]["undetermined"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(srg(&["verify", "lemmas", "--spec", "muT:7"]).status.code(), Some(2));
    assert_eq!(srg(&["inventory", "--spec", "nonsense"]).status.code(), Some(2));
    assert_eq!(srg(&["ws2", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(srg(&["verify", "lemmas"]).status.code(), Some(2));
    assert_eq!(
        srg(&["tables", "reflections", "--out", "/nonexistent-dir/x.json"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(srg(&["ws2", "--cap", "1000"]).status.code(), Some(4));
    assert_eq!(
        srg(&["verify", "lemmas", "--spec", "muI:240", "--cap", "100"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn out_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ws2.json");
    let cache = dir.path().join("cache");
    let args = [
        "ws2",
        "--out",
        path.to_str().unwrap(),
        "--cache",
        cache.to_str().unwrap(),
        "--seed",
        "7",
    ];
    let out = srg(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    assert!(std::fs::read_dir(&cache).unwrap().next().is_some());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["ws2"]["stabilizer_order"], 96);
    assert_eq!(v["totals"]["fail"], 0);
    assert_eq!(srg(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn text_format() {
    let out = srg(&["inventory", "--spec", "OT:2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("spec=OT:2"));
    assert!(text.trim_end().ends_with("pass 1 fail 0 undetermined 0"));
}
