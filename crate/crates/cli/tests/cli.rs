use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stabform"));
    c.env_remove("SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

/// Checks the exit code and that the error is a JSON object on stderr with
/// nothing on stdout.
fn error(o: &Output, code: i32) -> Value {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty(), "partial output: {}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_slice(&o.stderr).expect("error is JSON");
    assert!(v["error"]["kind"].is_string());
    assert!(v["error"]["message"].is_string());
    v["error"].clone()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn canon_pcm_of_zero_matrix_has_rank_zero() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "0000\n0000\n0000\n");
    let v = json_out(&run(&["canon", "pcm", "--in", s(&a)]));
    assert_eq!(v["r"], 0);
    assert_eq!(v["mode"], "stabilizer");
    assert_eq!(v["m"], 3);
    assert_eq!(v["n2"], 4);
    assert_eq!(v["alpha"], json!([]));
}

#[test]
fn verify_accepts_lambda_2() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "l2.txt", "01\n10\n");
    let v = json_out(&run(&["verify", "--symplectic", "--in", s(&a)]));
    assert_eq!(v["ok"], true);
}

#[test]
fn depolarizing_single_qubit_bound() {
    let v = json_out(&run(&["bounds", "depolarizing", "--n", "1", "--delta", "0.3", "--m", "1"]));
    assert_eq!(v["p_conv"], "1/5");
    assert_eq!(v["exact"], true);
    assert_eq!(v["n"], 1);
    assert_eq!(v["m"], 1);
    assert_eq!(v["rate"], 0.0);
    // The float path agrees.
    let f = json_out(&run(&["bounds", "depolarizing", "--n", "1", "--delta", "0.3", "--m", "1", "--float"]));
    assert_eq!(f["exact"], false);
    assert!((f["p_conv"].as_f64().unwrap() - 0.2).abs() < 1e-12);
}

#[test]
fn generic_table_matches_depolarizing() {
    let dir = TempDir::new().unwrap();
    let table = json!({ "n": 1, "entries": [
        { "u": "00", "v": "", "p": "7/10" },
        { "u": "10", "v": "", "p": "1/10" },
        { "u": "01", "v": "", "p": "1/10" },
        { "u": "11", "v": "", "p": "1/10" },
    ]});
    let t = write(&dir, "t.json", &table.to_string());
    let g = json_out(&run(&["bounds", "generic", "--dist", s(&t), "--m", "1"]));
    let d = json_out(&run(&["bounds", "depolarizing", "--n", "1", "--delta", "3/10", "--m", "1"]));
    assert_eq!(g["p_conv"], d["p_conv"]);
    assert_eq!(g["p_ach"], d["p_ach"]);
    assert_eq!(g["channel"], "table");
}

fn round_trip(dir: &TempDir, mode: &str, text: &str) {
    let a = write(dir, "a.txt", text);
    let q = dir.path().join("q.json");
    stdout(&run(&["canon", mode, "--in", s(&a), "--out", s(&q)]));
    let back = stdout(&run(&["reconstruct", "--in", s(&q)]));
    assert_eq!(back, text, "mode {mode}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&q).unwrap()).unwrap();
    let checked = json_out(&run(&["verify", "--quintuple", "--in", s(&q)]));
    assert_eq!(checked["ok"], true);
    assert_eq!(checked["r"], v["r"]);
}

#[test]
fn canon_reconstruct_round_trip_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    for seed in ["1", "2", "3"] {
        let sym = stdout(&run(&["sample", "symplectic", "--n", "5", "--seed", seed]));
        round_trip(&dir, "symplectic", &sym);
        let pcm = stdout(&run(&["sample", "pcm", "--m", "4", "--n", "5", "--rank", "3", "--seed", seed]));
        round_trip(&dir, "pcm", &pcm);
        round_trip(&dir, "unrestricted", &pcm);
    }
    round_trip(&dir, "unrestricted", "10110\n01101\n11011\n");
}

#[test]
fn round_trip_through_stdin() {
    let sym = stdout(&run(&["sample", "symplectic", "--n", "3", "--seed", "9"]));
    let q = stdout(&run_stdin(&["canon", "symplectic", "--in", "-"], &sym));
    let back = stdout(&run_stdin(&["reconstruct", "--in", "-"], &q));
    assert_eq!(back, sym);
}

#[test]
fn gates_rebuild_the_matrix() {
    let dir = TempDir::new().unwrap();
    let sym = stdout(&run(&["sample", "symplectic", "--n", "4", "--seed", "5"]));
    let a = write(&dir, "a.txt", &sym);
    let v = json_out(&run(&["canon", "symplectic", "--in", s(&a), "--gates"]));
    let gates = v["gates"].as_array().unwrap();
    assert!(!gates.is_empty());
    for g in gates {
        assert!(g["gate"].is_string());
        assert!(g["qubits"].as_array().unwrap().iter().all(|q| q.as_u64().unwrap() < 4));
    }
}

#[test]
fn seeded_output_is_reproducible() {
    let a = run(&["sample", "symplectic", "--n", "6", "--seed", "42", "--count", "3"]);
    let b = bin()
        .args(["sample", "symplectic", "--n", "6", "--count", "3"])
        .env("SEED", "42")
        .output()
        .unwrap();
    assert_eq!(stdout(&a), stdout(&b));
    let c = run(&["sample", "symplectic", "--n", "6", "--seed", "43", "--count", "3"]);
    assert_ne!(stdout(&a), stdout(&c));
    // Sample k does not depend on how many are drawn.
    let one = stdout(&run(&["sample", "symplectic", "--n", "6", "--seed", "42"]));
    assert!(stdout(&a).contains(&one));
}

#[test]
fn sample_json_has_every_matrix() {
    let v = json_out(&run(&[
        "sample", "pcm", "--m", "3", "--n", "4", "--rank", "2", "--seed", "1", "--count", "4", "--format", "json",
    ]));
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 4);
    for m in samples {
        let rows = m.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.as_str().unwrap().len() == 8));
    }
}

#[test]
fn counts() {
    let v = json_out(&run(&["count", "symplectic", "--n", "1"]));
    assert_eq!(v["count"], "6");
    let v = json_out(&run(&["count", "symplectic", "--n", "3"]));
    assert_eq!(v["count"], "1451520");
    // All 2^4 one-row matrices of width 4 are self-orthogonal.
    let v = json_out(&run(&["count", "pcm", "--m", "1", "--n", "2"]));
    assert_eq!(v["count"], "16");
    let text = stdout(&run(&["count", "pcm", "--m", "1", "--n", "2", "--rank", "1", "--format", "text"]));
    assert_eq!(text, "15\n");
}

#[test]
fn simulation_is_independent_of_threads() {
    let args = [
        "simulate", "--channel", "erasure", "--n", "6", "--delta", "0.1", "--m", "4", "--trials", "3000", "--seed", "7",
    ];
    let one = stdout(&run(&args));
    let mut more = args.to_vec();
    more.extend(["--threads", "3"]);
    assert_eq!(one, stdout(&run(&more)));
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["trials"], 3000);
    for key in ["p_hat", "p_conv", "p_ach", "ci95"] {
        assert!(!v[key].is_null(), "{key}");
    }
    let (lo, hi) = (v["ci95"][0].as_f64().unwrap(), v["ci95"][1].as_f64().unwrap());
    let p = v["p_hat"].as_f64().unwrap();
    assert!(lo <= p && p <= hi);
    assert_eq!(v["sandwiched"], true);
}

#[test]
fn sweeps_emit_csv() {
    let out = stdout(&run(&["bounds", "erasure", "--n", "6", "--delta", "1/5", "--sweep", "m", "--threads", "2"]));
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "n,m,rate,p_conv,p_ach,p_conv_approx,p_ach_approx,exact");
    assert_eq!(lines.len(), 8);
    assert!(lines[1].starts_with("6,0,1,"));
    let out = stdout(&run(&[
        "bounds", "depolarizing", "--n", "4,8,16", "--delta", "0.05", "--epsilon", "0.1", "--sweep", "n",
    ]));
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n,epsilon,m_ach,m_conv"));
    let v = json_out(&run(&[
        "bounds", "erasure", "--n", "4,8", "--delta", "0.05", "--m", "2", "--sweep", "n", "--format", "json",
    ]));
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn rate_search_reports_nulls() {
    let v = json_out(&run(&["bounds", "erasure", "--n", "4", "--delta", "0.4", "--epsilon", "1/1000"]));
    assert!(v["m_ach"].is_null());
    assert!(v["r_ach"].is_null());
    assert!(v["m_conv"].is_u64());
}

#[test]
fn usage_errors_exit_2() {
    error(&run(&[]), 2);
    error(&run(&["frobnicate"]), 2);
    error(&run(&["bounds", "erasure", "--n", "4", "--delta", "0.1"]), 2);
    error(&run(&["bounds", "erasure", "--n", "4", "--delta", "0.1", "--m", "1", "--epsilon", "0.1"]), 2);
    error(&run(&["bounds", "erasure", "--n", "4,5", "--delta", "0.1", "--m", "1"]), 2);
    error(&run(&["sample", "symplectic", "--n", "2"]), 2);
    error(&run(&["simulate", "--channel", "erasure", "--n", "4", "--m", "1", "--trials", "5", "--seed", "1"]), 2);
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.txt", "00\n");
    let e = error(&run(&["canon", "pcm", "--in", s(&a), "--gates"]), 2);
    assert_eq!(e["kind"], "usage");
    error(&run(&["canon", "pcm", "--in", s(&a), "--format", "csv"]), 2);
}

#[test]
fn help_and_version_succeed() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
    assert!(run(&["bounds", "--help"]).status.success());
}

#[test]
fn domain_errors_exit_1_and_name_the_problem() {
    let dir = TempDir::new().unwrap();
    let e = error(&run(&["canon", "pcm", "--in", s(&dir.path().join("missing.txt"))]), 1);
    assert_eq!(e["kind"], "io");

    let bad = write(&dir, "bad.txt", "0101\n01x1\n");
    let e = error(&run(&["canon", "unrestricted", "--in", s(&bad)]), 1);
    assert_eq!(e["kind"], "parse");
    assert_eq!(e["line"], 2);

    let ragged = write(&dir, "ragged.txt", "0101\n011\n");
    error(&run(&["canon", "unrestricted", "--in", s(&ragged)]), 1);

    let not_sym = write(&dir, "ns.txt", "11\n11\n");
    let e = error(&run(&["canon", "symplectic", "--in", s(&not_sym)]), 1);
    assert_eq!(e["kind"], "not_symplectic");
    assert_eq!(e["invariant"], "A^T Λ A = Λ");
    let e = error(&run(&["verify", "--symplectic", "--in", s(&not_sym)]), 1);
    assert_eq!(e["invariant"], "A^T Λ A = Λ");

    let not_pcm = write(&dir, "np.txt", "1000\n0001\n");
    let e = error(&run(&["canon", "pcm", "--in", s(&not_pcm)]), 1);
    assert_eq!(e["kind"], "not_stabilizer");
    let e = error(&run(&["verify", "--pcm", "--in", s(&not_pcm)]), 1);
    assert_eq!(e["invariant"], "A Λ A^T = 0");

    let e = error(&run(&["bounds", "erasure", "--n", "4", "--delta", "1.5", "--m", "1"]), 1);
    assert_eq!(e["kind"], "invalid_parameter");
    error(&run(&["bounds", "erasure", "--n", "4", "--delta", "0.1", "--m", "9"]), 1);
    error(&run(&["sample", "pcm", "--m", "2", "--n", "2", "--rank", "3", "--seed", "1"]), 1);
    error(
        &run(&["simulate", "--channel", "erasure", "--n", "40", "--delta", "0.1", "--m", "4", "--trials", "5", "--seed", "1"]),
        1,
    );

    let table = write(&dir, "t.json", r#"{"n": 1, "entries": [{"u": "00", "v": "", "p": "1/2"}]}"#);
    let e = error(&run(&["bounds", "generic", "--dist", s(&table), "--m", "1"]), 1);
    assert_eq!(e["kind"], "invalid_table");
    let junk = write(&dir, "j.json", "{ not json");
    let e = error(&run(&["reconstruct", "--in", s(&junk)]), 1);
    assert_eq!(e["kind"], "json");
}

#[test]
fn tampered_quintuples_are_rejected() {
    let dir = TempDir::new().unwrap();
    let sym = stdout(&run(&["sample", "symplectic", "--n", "3", "--seed", "11"]));
    let a = write(&dir, "a.txt", &sym);
    let mut q = json_out(&run(&["canon", "symplectic", "--in", s(&a)]));
    // An upper-triangular entry takes L out of the Borel subgroup.
    let row0 = q["L"][0].as_str().unwrap().to_owned();
    q["L"][0] = json!(format!("1{}1", &row0[1..row0.len() - 1]));
    let t = write(&dir, "q.json", &q.to_string());
    let e = error(&run(&["reconstruct", "--in", s(&t)]), 1);
    assert_eq!(e["kind"], "membership");
    assert!(e["invariant"].as_str().unwrap().contains("L"));
    error(&run(&["verify", "--quintuple", "--in", s(&t)]), 1);

    q["L"] = json!(["100", "010", "001"]);
    let t = write(&dir, "q2.json", &q.to_string());
    error(&run(&["reconstruct", "--in", s(&t)]), 1);
}
