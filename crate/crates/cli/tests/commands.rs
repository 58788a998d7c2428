use std::io::Write;

use assert_cmd::Command;

fn incmat(args: &[&str]) -> (String, i32) {
    let out = Command::cargo_bin("incmat")
        .unwrap()
        .args(args)
        .output()
        .unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap(),
    )
}

#[test]
fn rank_and_tableau() {
    assert_eq!(incmat(&["rank", "2,3,7,8"]), ("3\n".into(), 0));
    assert_eq!(incmat(&["rank", ""]), ("0\n".into(), 0));
    assert_eq!(
        incmat(&["tableau", "2,3,7,8"]),
        ("2 3 7 8\n1 j 6 5\n".into(), 0)
    );
}

#[test]
fn chain_arrows() {
    let (out, code) = incmat(&["chain", "2,3", "--v", "6"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2 → 23 → 234 → 2345 → 23456\n");
}

#[test]
fn decompose_json() {
    let (out, code) = incmat(&["decompose", "--v", "1"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["v"], 1);
    assert_eq!(doc["kind"], "rank");
    assert_eq!(doc["chains"][0]["members"], serde_json::json!(["", "1"]));
    let (text, _) = incmat(&[
        "decompose",
        "--v",
        "6",
        "--kind",
        "complement",
        "--format",
        "text",
    ]);
    assert!(text.lines().any(|l| l == "12 → 126 → 1256"));
    assert_eq!(text.lines().count(), 20);
}

#[test]
fn matrix_formats() {
    let (out, code) = incmat(&[
        "matrix",
        "wbar",
        "--t",
        "1",
        "--k",
        "2",
        "--v",
        "3",
        "--no-labels",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "3 3\n1 1 1\n1 0 1\n0 1 1\n");
    let (out, _) = incmat(&[
        "matrix", "wtk", "--t", "1", "--k", "2", "--v", "3", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        doc["entries"],
        serde_json::json!([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    );
    let (out, _) = incmat(&[
        "matrix", "r", "--i", "0", "--t", "1", "--v", "3", "--format", "csv",
    ]);
    assert!(out.lines().last().unwrap().ends_with("1,1,1"));
}

#[test]
fn snf_by_kind_and_file() {
    assert_eq!(
        incmat(&["snf", "--kind", "wbar", "--t", "1", "--k", "2", "--v", "3"]),
        ("d = 1,1,1\n".into(), 0)
    );
    assert_eq!(
        incmat(&["snf", "--kind", "wtk", "--t", "1", "--k", "2", "--v", "4"]),
        ("d = 1,1,1,2\n".into(), 0)
    );
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"2 2\n2 4\n6 8\n").unwrap();
    let path = file.path().to_str().unwrap();
    assert_eq!(incmat(&["snf", "--input", path]), ("d = 2,4\n".into(), 0));
    let (out, _) = incmat(&["snf", "--input", path, "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["d"], serde_json::json!([2, 4]));
}

#[test]
fn solve_outcomes() {
    let (out, code) = incmat(&["solve", "--t", "2", "--k", "3", "--v", "8", "--lambda", "1"]);
    assert_eq!(code, 1);
    assert_eq!(out.lines().next(), Some("violated at i=0: 3 ∤ 28"));
    let (out, code) = incmat(&["solve", "--t", "2", "--k", "3", "--v", "7", "--lambda", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 35);
    let (out, code) = incmat(&[
        "solve", "--t", "1", "--k", "2", "--v", "4", "--lambda", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["feasible"], true);
    assert!(doc["violated_levels"].is_null());
}

#[test]
fn solve_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"1 #1\n0 #2\n0 #3\n0 #4\n").unwrap();
    let path = file.path().to_str().unwrap();
    let (_, code) = incmat(&[
        "solve", "--t", "1", "--k", "2", "--v", "4", "--b-file", path,
    ]);
    assert_eq!(code, 1);
    let (_, code) = incmat(&[
        "solve", "--t", "1", "--k", "4", "--v", "4", "--b-file", path,
    ]);
    assert_eq!(code, 2, "k > v - t is a usage error");
}

#[test]
fn verify_small() {
    let (out, code) = incmat(&["verify", "--v-max", "6"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("18/18 checks passed\n"));
    assert_eq!(incmat(&["verify", "--v-max", "99"]).1, 2);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["rank", "3,2"],
        vec!["rank", "0"],
        vec!["chain", "7", "--v", "6"],
        vec!["matrix", "wtk", "--v", "3"],
        vec!["matrix", "wtk", "--t", "2", "--k", "1", "--v", "3"],
        vec!["snf"],
        vec!["solve", "--t", "1", "--k", "2", "--v", "4"],
        vec!["decompose", "--v", "0"],
        vec!["frobnicate"],
    ] {
        assert_eq!(incmat(&args).1, 2, "{args:?}");
    }
}
