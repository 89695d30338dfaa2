//! CLI surface tests: every subcommand end-to-end against the fixture
//! corpus, the stdio service, and the heavy-scorer protocol.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_argrec")
}

fn fixture(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(path)
}

fn train_bundle(dir: &Path) {
    let out = Command::new(bin())
        .args([
            "train",
            "--corpus",
            fixture("coverage/manifest.txt").to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--with-heavy",
        ])
        .output()
        .expect("train runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("summary is JSON");
    assert!(summary["requests"].as_u64().unwrap() >= 50);
}

#[test]
fn train_writes_a_complete_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("bundle");
    train_bundle(&dir);
    for name in [
        "manifest.json",
        "vocab.txt",
        "tables.json",
        "counts/global.txt",
        "heavy/vocab.txt",
        "heavy/counts/global.txt",
    ] {
        assert!(dir.join(name).exists(), "missing {name}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["order"], 6);
    assert_eq!(manifest["counts_format"], "sorted-text-v1");
    assert_eq!(manifest["has_heavy"], true);
}

#[test]
fn recommend_resolves_a_hole_in_partial_code() {
    let tmp = tempfile::tempdir().unwrap();
    let bundle = tmp.path().join("bundle");
    train_bundle(&bundle);
    // partially completed code: the second argument of `use` is unfilled
    let partial = "class Partial {\n\
                   \x20   void use(String text, int amount) {\n\
                   \x20   }\n\
                   \x20   void go(String name, int count) {\n\
                   \x20       use(name, );\n\
                   \x20   }\n\
                   }\n";
    let file = tmp.path().join("Partial.java");
    std::fs::write(&file, partial).unwrap();
    let col = (partial.lines().nth(4).unwrap().find(", )").unwrap() + 3) as u32;
    let out = Command::new(bin())
        .args([
            "recommend",
            "--bundle",
            bundle.to_str().unwrap(),
            "--file",
            file.to_str().unwrap(),
            "--line",
            "5",
            "--col",
            &col.to_string(),
            "-k",
            "5",
        ])
        .output()
        .expect("recommend runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["callee"], "use");
    assert_eq!(doc["pos"], 2);
    let cands = doc["candidates"].as_array().unwrap();
    assert!(!cands.is_empty());
    assert!(cands.iter().any(|c| c["rendered"] == "count"));
    // scores are sorted non-increasing
    let scores: Vec<f64> = cands.iter().map(|c| c["score"].as_f64().unwrap()).collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn stats_emits_json_and_csv_distributions() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("stats");
    let out = Command::new(bin())
        .args([
            "stats",
            "--corpus",
            fixture("coverage/manifest.txt").to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ])
        .output()
        .expect("stats runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("stats.json")).unwrap())
            .unwrap();
    let shares = report["expr_type_shares"].as_array().unwrap();
    let sum: f64 = shares.iter().map(|s| s["share"].as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-9);
    for csv in ["expr_types.csv", "expected_types.csv", "parasim_histogram.csv"] {
        let text = std::fs::read_to_string(out_dir.join(csv)).unwrap();
        assert!(text.starts_with("key,count,share"), "{csv} malformed");
    }
}

#[test]
fn evaluate_writes_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let bundle = tmp.path().join("bundle");
    let out = Command::new(bin())
        .args([
            "train",
            "--corpus",
            fixture("scenario/manifest.txt").to_str().unwrap(),
            "--out",
            bundle.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report_path = tmp.path().join("report.json");
    let out = Command::new(bin())
        .args([
            "evaluate",
            "--bundle",
            bundle.to_str().unwrap(),
            "--split",
            fixture("scenario/split.json").to_str().unwrap(),
            "--scenario",
            "maintenance",
            "--out",
            report_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["scenario"], "maintenance");
    assert_eq!(report["a"], 9);
    assert_eq!(report["at_k"][0]["k"], 1);
}

#[test]
fn serve_answers_requests_and_survives_garbage() {
    let tmp = tempfile::tempdir().unwrap();
    let bundle = tmp.path().join("bundle");
    train_bundle(&bundle);
    let mut child = Command::new(bin())
        .args(["serve", "--bundle", bundle.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("serve starts");
    let mut stdin = child.stdin.take().unwrap();
    let mut lines = BufReader::new(child.stdout.take().unwrap()).lines();
    let context = "class Probe { void take(int v) {} void m(int count) { take(count); } }";
    let req = serde_json::json!({
        "id": 41,
        "context": context,
        "callee": "take",
        "pos": 1,
        "k": 3
    });
    writeln!(stdin, "{req}").unwrap();
    writeln!(stdin, "garbage line").unwrap();
    writeln!(stdin, "{req}").unwrap();
    let first: serde_json::Value =
        serde_json::from_str(&lines.next().unwrap().unwrap()).unwrap();
    assert_eq!(first["id"], 41);
    assert!(first["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["rendered"] == "count"));
    let second: serde_json::Value =
        serde_json::from_str(&lines.next().unwrap().unwrap()).unwrap();
    assert!(second["error"].is_string());
    let third: serde_json::Value =
        serde_json::from_str(&lines.next().unwrap().unwrap()).unwrap();
    assert_eq!(third, first, "replaying a request gives the identical response");
    drop(stdin);
    let _ = child.wait();
}

#[test]
fn heavy_score_speaks_the_protocol() {
    let tmp = tempfile::tempdir().unwrap();
    let bundle = tmp.path().join("bundle");
    train_bundle(&bundle);
    let mut child = Command::new(bin())
        .args(["heavy-score", "--bundle", bundle.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("heavy-score starts");
    let mut stdin = child.stdin.take().unwrap();
    let mut lines = BufReader::new(child.stdout.take().unwrap()).lines();
    let req = serde_json::json!({
        "id": 7,
        "context": ["use", "("],
        "candidates": [["count"], ["name"], ["<unk>"]]
    });
    writeln!(stdin, "{req}").unwrap();
    let resp: serde_json::Value = serde_json::from_str(&lines.next().unwrap().unwrap()).unwrap();
    assert_eq!(resp["id"], 7);
    let scores = resp["scores"].as_array().unwrap();
    assert_eq!(scores.len(), 3);
    assert!(scores.iter().all(|s| s.as_f64().unwrap() > 0.0));
    drop(stdin);
    let _ = child.wait();
}

#[test]
fn missing_bundle_is_a_usage_error() {
    let out = Command::new(bin())
        .args(["recommend", "--file", "x.java", "--line", "1", "--col", "1"])
        .env_remove("ARGREC_BUNDLE")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["error"].as_str().unwrap().contains("bundle"));
}

#[test]
fn bundle_env_override_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let bundle = tmp.path().join("bundle");
    train_bundle(&bundle);
    let file = tmp.path().join("P.java");
    std::fs::write(
        &file,
        "class P { void take(int v) {} void m(int count) { take(count); } }",
    )
    .unwrap();
    let out = Command::new(bin())
        .args([
            "recommend",
            "--file",
            file.to_str().unwrap(),
            "--line",
            "1",
            "--col",
            "56",
        ])
        .env("ARGREC_BUNDLE", bundle.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
