use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], input: &Value) -> (i32, Value, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_k3lag"))
        .args(args)
        .env_remove("K3LAG_HEIGHT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.to_string().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).expect("stdout is json");
    (out.status.code().unwrap(), doc, out.stdout)
}

fn k3(entries: &[(usize, i64)]) -> Value {
    let mut v = vec![json!("0"); 22];
    for &(i, x) in entries {
        v[i] = json!(x.to_string());
    }
    Value::Array(v)
}

/// Runs `verify` on an emitted document and asserts it passes.
fn round_trip(doc: &Value) {
    let (code, v, _) = run(&["verify"], doc);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["result"]["verified"], json!(true), "{v:#}");
    assert!(v["result"]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn classify_negative_rank_one() {
    let (code, doc, _) = run(&["classify"], &json!({ "lattice": [["-4"]] }));
    assert_eq!(code, 0);
    let r = &doc["result"];
    assert_eq!(r["case"], "Split");
    assert_eq!(r["roots_generate"], false);
    assert_eq!(r["equal"], false);
    round_trip(&doc);
}

#[test]
fn classify_hyperbolic_has_witness() {
    let (code, doc, _) = run(&["classify", "--lattice", "U"], &Value::Null);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["case"], "PositiveWitness");
    assert_eq!(doc["result"]["equal"], true);
    round_trip(&doc);
}

#[test]
fn non_symmetric_gram_is_malformed() {
    let (code, doc, _) = run(&["info"], &json!({ "gram": [[0, 1], [2, 0]] }));
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["code"], "gram_not_symmetric");
}

#[test]
fn bad_json_is_malformed() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_k3lag"))
        .arg("info")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{not json").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn info_undecided_search_exits_three() {
    let (code, doc, _) = run(&["info", "--height", "3"], &json!({ "gram": [[1, 0, 0], [0, 1, 0], [0, 0, -3]] }));
    assert_eq!(code, 3);
    assert_eq!(doc["result"]["isotropic"]["status"], "unknown");
    assert_eq!(doc["result"]["isotropic"]["height"], "3");
}

#[test]
fn info_k3_round_trip() {
    let (code, doc, _) = run(&["info"], &Value::Null);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["rank"], 22);
    assert_eq!(doc["result"]["signature"], json!([3, 19, 0]));
    assert_eq!(doc["result"]["unimodular"], true);
    round_trip(&doc);
}

#[test]
fn syz_on_first_hyperbolic_plane() {
    let (code, doc, _) = run(&["syz"], &json!({ "w": k3(&[(0, 1), (1, 1)]) }));
    assert_eq!(code, 0, "{doc:#}");
    let r = &doc["result"];
    assert_eq!(r["ell"], k3(&[(2, 1)]));
    assert_eq!(r["checks"]["ell_sq"], "0");
    assert_eq!(r["checks"]["pairing"], "0");
    round_trip(&doc);
}

#[test]
fn syz_rejects_negative_polarization() {
    let (code, doc, _) = run(&["syz"], &json!({ "w": k3(&[(0, 1), (1, -1)]) }));
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["code"], "not_positive");
}

#[test]
fn syz_nef_walk_round_trip() {
    let input = json!({ "lattice": "U+<-2>", "omega": [3, 2, 1], "ell": [1, 1, -1] });
    let (code, doc, _) = run(&["syz"], &input);
    assert_eq!(code, 0, "{doc:#}");
    assert_eq!(doc["result"]["pairing_trace"], json!(["7", "3", "2"]));
    assert_eq!(doc["result"]["nef_class"], json!(["1", "0", "0"]));
    round_trip(&doc);
}

#[test]
fn sample_count_zero_is_malformed() {
    let (code, _, _) = run(&["sample", "--count", "0"], &Value::Null);
    assert_eq!(code, 2);
}

#[test]
fn sample_forced_polarization() {
    let (code, doc, _) = run(&["sample"], &json!({ "w": k3(&[(0, 1), (1, 1)]) }));
    assert_eq!(code, 0);
    let t = &doc["result"]["trials"][0];
    assert_eq!(t["positive"]["v"], k3(&[(2, 1), (3, 1)]));
    assert_eq!(t["isotropic"]["ell"], k3(&[(2, 1)]));
    round_trip(&doc);
}

#[test]
fn sample_hundred_all_succeed() {
    let (code, doc, _) = run(&["sample", "--count", "100", "--seed", "42"], &Value::Null);
    assert_eq!(code, 0);
    let r = &doc["result"];
    assert_eq!(r["positive_successes"], 100);
    assert_eq!(r["isotropic_successes"], 100);
    assert_eq!(r["failures"], json!([]));
    round_trip(&doc);
}

#[test]
fn output_is_deterministic() {
    let args = ["sample", "--count", "12", "--seed", "7"];
    let (_, _, a) = run(&args, &Value::Null);
    let (_, _, b) = run(&args, &Value::Null);
    assert_eq!(a, b);
}

#[test]
fn decompose_toy_period() {
    let period = json!({
        "host": "U3",
        "theta_re": [1, 1, 0, 0, 0, 0],
        "theta_im": [0, 0, 1, 1, 0, 0],
        "omega": [0, 0, 0, 0, 1, 1],
    });
    let input = json!({ "period": period, "gamma": [1, 0, 1, 0, 0, 0], "probes": [[1, 0, 0, 0, 0, 0]] });
    let (code, doc, _) = run(&["decompose"], &input);
    assert_eq!(code, 0, "{doc:#}");
    let r = &doc["result"];
    assert_eq!(r["verified"], true);
    assert_eq!(r["rotation"]["zeta_squared"], json!({ "re": "0/1", "im": "-1/1" }));
    round_trip(&doc);
}

#[test]
fn decompose_in_lattice() {
    let (code, doc, _) = run(&["decompose", "--lattice", "U+E8"], &json!({ "gamma": [3, 1, 1, 0, 0, 0, 0, 0, 0, 2] }));
    assert_eq!(code, 0, "{doc:#}");
    assert_eq!(doc["result"]["verified"], true);
    round_trip(&doc);
}

#[test]
fn realize_round_trips() {
    let (code, doc, _) = run(&["realize", "--lattice", "U3"], &json!({ "generators": [[1, 1, 0, 0, 0, 0]] }));
    assert_eq!(code, 0, "{doc:#}");
    assert_eq!(doc["result"]["ok"], true);
    round_trip(&doc);

    let (code, doc, _) = run(&["realize", "--lattice", "U3"], &json!({ "generators": [[2, 0, 0, 0, 0, 0]] }));
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["failing_condition"], "NotSaturated");
    round_trip(&doc);
}

#[test]
fn eichler_round_trip() {
    let (code, doc, _) = run(&["eichler"], &json!({ "w": k3(&[(0, 3), (1, 5), (5, 2), (6, 3), (15, -1)]) }));
    assert_eq!(code, 0, "{doc:#}");
    assert_eq!(doc["result"]["checks"]["preserves"], true);
    assert_eq!(doc["result"]["checks"]["maps_to_target"], true);
    round_trip(&doc);
}

#[test]
fn roots_round_trips() {
    let (code, doc, _) = run(&["roots", "--lattice", "E8"], &Value::Null);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["count"], 240);
    round_trip(&doc);

    let (code, doc, _) = run(&["roots", "--lattice", "U+E8"], &json!({ "omega": [2, 3, 0, 0, 0, 0, 0, 0, 0, 0], "bound": 4 }));
    assert_eq!(code, 0, "{doc:#}");
    round_trip(&doc);
}

#[test]
fn tampered_document_fails_verification() {
    let (_, mut doc, _) = run(&["syz"], &json!({ "w": k3(&[(0, 1), (1, 1)]) }));
    doc["result"]["ell"] = k3(&[(0, 1)]);
    let (code, v, _) = run(&["verify"], &doc);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["verified"], false);
}

#[test]
fn input_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    std::fs::write(&input, json!({ "lattice": "U" }).to_string()).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_k3lag"))
        .args(["info", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()])
        .stdout(Stdio::null())
        .status()
        .unwrap();
    assert!(status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(doc["result"]["signature"], json!([1, 1, 0]));
}

#[test]
fn height_from_environment() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_k3lag"))
        .arg("info")
        .env("K3LAG_HEIGHT", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"gram": [[1,0,0],[0,1,0],[0,0,-3]]}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["options"]["height"], "2");
}
