use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn banlat(args: &[&str], stdin: &str) -> (Value, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_banlat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).expect("JSON report on stdout");
    (report, out.status.code().unwrap())
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn subspace_lattice_of_the_plane_has_five_elements() {
    let (r, code) = banlat(&["lattice", "subspace", "--q", "2", "--dim", "2"], "");
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "value");
    assert_eq!(r["witnesses"]["lattice"]["n"], 5);
}

#[test]
fn enumeration_up_to_one_element() {
    let (r, _) = banlat(&["lattice", "enumerate", "--max-n", "1"], "");
    assert_eq!(r["witnesses"]["lattices"].as_array().unwrap().len(), 1);
}

#[test]
fn piped_matrix_ring_into_lat() {
    let (m, _) = banlat(&["ring", "matrix", "--q", "2", "--n", "2"], "");
    let (r, code) = banlat(&["ring", "lat"], &m.to_string());
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"]["lattice"]["n"], 5);
    assert_eq!(r["witnesses"]["generators"].as_array().unwrap().len(), 5);
}

#[test]
fn z4_is_not_regular_at_two() {
    let (r, code) = banlat(&["ring", "regular"], r#"{"integers_mod":4}"#);
    assert_eq!((r["verdict"].as_str(), code), (Some("fail"), 0));
    assert_eq!(r["witnesses"]["witness"], 2);
}

#[test]
fn identity_eps_on_f2() {
    let (r, _) = banlat(
        &["ring", "eps-check"],
        r#"{"ring":{"integers_mod":2},"eps":[0,1]}"#,
    );
    assert_eq!(r["verdict"], "pass");
    let (r, _) = banlat(&["ring", "eps-check"], r#"{"integers_mod":6}"#);
    assert_eq!(
        (r["verdict"].as_str(), r["witnesses"]["derived"].as_bool()),
        (Some("pass"), Some(true))
    );
}

#[test]
fn ring_trace_of_f2_squared_is_normal_and_verifies() {
    let ring = r#"{"product":[{"integers_mod":2},{"integers_mod":2}]}"#;
    let (t, code) = banlat(&["trace", "from-ring"], ring);
    assert_eq!(code, 0);
    assert_eq!(t["witnesses"]["trace"]["normal"], true);
    let (v, code) = banlat(&["trace", "verify"], &t.to_string());
    assert_eq!((v["verdict"].as_str(), code), (Some("pass"), 0));
}

#[test]
fn chain_trace_round_trip() {
    let (t, _) = banlat(
        &["trace", "from-chain"],
        r#"{"kind":"fd-subspaces","q":2,"depth":2}"#,
    );
    let (v, _) = banlat(&["trace", "verify"], &t.to_string());
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn finite_subsets_embedding_verifies() {
    let (r, code) = banlat(
        &[
            "embed",
            "verify",
            "--kind",
            "finite-subsets",
            "--depth",
            "6",
        ],
        "",
    );
    assert_eq!((r["verdict"].as_str(), code), (Some("pass"), 0));
    assert_eq!(r["witnesses"]["finite_part"], 64);
}

#[test]
fn embed_build_counts_elements() {
    let (r, _) = banlat(
        &["embed", "build", "--kind", "finite-subsets", "--depth", "2"],
        "",
    );
    let count = r["witnesses"]["count"].as_u64().unwrap();
    assert_eq!(
        count as usize,
        r["witnesses"]["elements"].as_array().unwrap().len()
    );
}

#[test]
fn block_chain_assembles() {
    let (r, code) = banlat(
        &["coord", "assemble"],
        r#"{"subspace_chain":{"q":2,"dims":[0,1,2]}}"#,
    );
    assert_eq!((r["verdict"].as_str(), code), (Some("pass"), 0));
    assert_eq!(r["witnesses"]["ring_sizes"], serde_json::json!([1, 2, 16]));
    let (r, _) = banlat(
        &["coord", "system-verify"],
        r#"{"block_chain":{"q":2,"sizes":[1,2]}}"#,
    );
    assert_eq!(r["verdict"], "pass");
    let (r, _) = banlat(&["coord", "lift"], r#"{"block":{"q":2,"a":1,"b":2}}"#);
    assert_eq!(r["witnesses"]["map"], serde_json::json!([0, 1]));
}

#[test]
fn exit_codes_follow_error_classes() {
    assert_eq!(banlat(&["ring", "regular"], "{").1, 1);
    assert_eq!(
        banlat(&["lattice", "check"], r#"{"n":2,"covers":[[0,1],[1,0]]}"#).1,
        1
    );
    assert_eq!(banlat(&["ring", "ban"], r#"{"integers_mod":4}"#).1, 2);
    let (r, code) = banlat(
        &["embed", "verify", "--kind", "fd-subspaces", "--depth", "9"],
        "",
    );
    assert_eq!(
        (r["witnesses"]["class"].as_str(), code),
        (Some("precondition"), 2)
    );
    let (r, code) = banlat(
        &["coord", "assemble", "--depth", "5"],
        r#"{"subspace_chain":{"q":2,"dims":[0,1]}}"#,
    );
    assert_eq!(
        (r["witnesses"]["class"].as_str(), code),
        (Some("precondition"), 2)
    );
}

#[test]
fn reports_are_deterministic_and_thread_independent() {
    let args = [
        "lattice",
        "lemma-sweep",
        "--builtin",
        "--samples",
        "50",
        "--seed",
        "3",
    ];
    let (a, _) = banlat(&args, "");
    let (b, _) = banlat(&[&args[..], &["--threads", "1"]].concat(), "");
    assert_eq!(without_elapsed(a), without_elapsed(b));
    let (c, _) = banlat(
        &["lattice", "census-ban", "--max-n", "7", "--threads", "3"],
        "",
    );
    let (d, _) = banlat(&["lattice", "census-ban", "--max-n", "7"], "");
    assert_eq!(without_elapsed(c), without_elapsed(d));
}

#[test]
fn text_format_prints_the_verdict() {
    let out = Command::new(env!("CARGO_BIN_EXE_banlat"))
        .args([
            "--format", "text", "lattice", "subspace", "--q", "3", "--dim", "1",
        ])
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("lattice subspace: value"));
}
