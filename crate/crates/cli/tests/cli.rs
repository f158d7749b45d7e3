use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hallforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hallforge"))
        .args(args)
        .env_remove("HALLFORGE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn without_runtime(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("runtime");
    v
}

fn entry<'a>(table: &'a Value, op: &str, left: &str, right: &str) -> &'a Value {
    table["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["op"] == op && r["left"] == left && r["right"] == right)
        .unwrap_or_else(|| panic!("no {op} record for {left}, {right}"))
}

#[test]
fn verify_exit_codes() {
    let ok = hallforge(&["verify", "--quiver", "a2", "--q", "2", "--max-dim", "2", "--suite", "double-relation"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stderr));
    let report = json(&ok);
    assert_eq!(report["passed"], true);
    assert_eq!(report["schema_version"], 1);

    assert_eq!(code(&hallforge(&["verify", "--quiver", "a1", "--q", "2", "--suite", "hall-assoc"])), 0);
    assert_eq!(code(&hallforge(&["verify", "--quiver", "a2", "--q", "11", "--suite", "hall-assoc"])), 2);
    assert_eq!(code(&hallforge(&["verify", "--quiver", "d4", "--suite", "hall-assoc"])), 2);
    assert_eq!(code(&hallforge(&["verify", "--suite", "nonsense"])), 2);
    assert_eq!(code(&hallforge(&["verify", "--frobnicate"])), 2);

    let tight = hallforge(&["verify", "--quiver", "a2", "--q", "3", "--budget", "2", "--suite", "hall-assoc"]);
    assert_eq!(code(&tight), 3);
    let partial = json(&tight);
    assert_eq!(partial["budget_exceeded"], true);
    assert!(partial["suites"][0]["error"].as_str().unwrap().contains("budget"));
}

#[test]
fn quiver_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(&path, r#"{"vertices": ["x", "y"], "arrows": [["x", "y"]]}"#).unwrap();
    let o = hallforge(&["verify", "--quiver", path.to_str().unwrap(), "--suite", "hall-assoc"]);
    assert_eq!(code(&o), 0);
    std::fs::write(&path, r#"{"vertices": ["x", "y"], "arrows": [["x", "y"], ["y", "x"]]}"#).unwrap();
    assert_eq!(code(&hallforge(&["verify", "--quiver", path.to_str().unwrap(), "--suite", "hall-assoc"])), 2);
}

#[test]
fn table_values() {
    let a1 = json(&hallforge(&["table", "--quiver", "a1", "--q", "2", "--max-dim", "2"]));
    let kk = entry(&a1, "diamond", "(1)#0", "(1)#0");
    assert_eq!(kk["result"], serde_json::json!([["[(2)#0]", "1/2 + 0*t"]]));

    let a2 = json(&hallforge(&["table", "--quiver", "a2", "--q", "2", "--max-dim", "2"]));
    // (1,1)#0 has the zero arrow map, so it is S1 + S2
    let s1s2 = entry(&a2, "star", "(1,0)#0", "(0,1)#0");
    let terms = s1s2["result"].as_array().unwrap();
    assert!(terms.contains(&serde_json::json!(["[(1,1)#0]", "0 + 1/2*t"])));

    let empty = json(&hallforge(&["table", "--quiver", "a2", "--max-dim", "0"]));
    assert_eq!(empty["labels"], serde_json::json!(["(0,0)#0"]));
}

#[test]
fn decompose_and_mul() {
    let o = hallforge(&["decompose", "--quiver", "a2", "--complex", r#"{"m1": [1, 0], "m0": [1, 0], "d1": [[1], [1]], "d0": [[0], [0]]}"#]);
    assert_eq!(code(&o), 0);
    let d = json(&o);
    assert_eq!(d["p"], serde_json::json!([1, 0]));
    assert_eq!(d["exponent"], 0);

    let bad = hallforge(&["decompose", "--quiver", "a2", "--complex", r#"{"m1": [1, 0], "m0": [1, 0], "d1": [[1], [1]], "d0": [[1], [1]]}"#]);
    assert_eq!(code(&bad), 2);

    let m = json(&hallforge(&["mul", "--quiver", "a2", "--product", "dh", "K(1,0)", "K*(0,1)"]));
    assert_eq!(m["result"].as_array().unwrap().len(), 1);
    assert_eq!(code(&hallforge(&["mul", "--product", "dh", "X(1,0)#0", "K(0,0)"])), 2);
}

fn cached_run(dir: &Path) -> Output {
    hallforge(&[
        "verify",
        "--quiver",
        "a2",
        "--q",
        "2",
        "--max-dim",
        "2",
        "--suite",
        "hall-assoc",
        "--suite",
        "double-relation",
        "--cache-dir",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cold = cached_run(dir.path());
    let warm = cached_run(dir.path());
    assert_eq!(code(&cold), 0);
    assert_eq!(code(&warm), 0);
    assert!(json(&warm)["runtime"]["store_hits"].as_u64().unwrap() > 0);
    assert_eq!(without_runtime(json(&cold)), without_runtime(json(&warm)));

    let plain = hallforge(&["verify", "--quiver", "a2", "--q", "2", "--max-dim", "2", "--suite", "hall-assoc", "--suite", "double-relation"]);
    assert_eq!(without_runtime(json(&plain)), without_runtime(json(&cold)));
    let disabled = hallforge(&[
        "verify",
        "--quiver",
        "a2",
        "--max-dim",
        "2",
        "--suite",
        "hall-assoc",
        "--suite",
        "double-relation",
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "--no-cache",
    ]);
    assert_eq!(json(&disabled)["runtime"]["store_hits"], 0);
    assert_eq!(without_runtime(json(&disabled)), without_runtime(json(&cold)));

    // byte-identical apart from the runtime block
    let again = hallforge(&["verify", "--quiver", "a2", "--q", "2", "--max-dim", "2", "--suite", "hall-assoc", "--suite", "double-relation"]);
    let strip = |o: &Output| serde_json::to_string(&without_runtime(json(o))).unwrap();
    assert_eq!(strip(&plain), strip(&again));
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cold = cached_run(dir.path());
    let mut n = 0;
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let path = e.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let broken = if n % 2 == 0 { text.replacen('1', "7", 1) } else { "{not json".to_string() };
        std::fs::write(&path, broken).unwrap();
        n += 1;
    }
    assert!(n > 0);
    let fixed = cached_run(dir.path());
    assert_eq!(code(&fixed), 0);
    assert!(String::from_utf8_lossy(&fixed.stderr).contains("warning: corrupt cache entry"));
    assert!(json(&fixed)["runtime"]["corrupt_cache_entries"].as_u64().unwrap() > 0);
    assert_eq!(without_runtime(json(&fixed)), without_runtime(json(&cold)));

    let clean = cached_run(dir.path());
    assert!(!String::from_utf8_lossy(&clean.stderr).contains("corrupt"));
    assert_eq!(without_runtime(json(&clean)), without_runtime(json(&cold)));
}
