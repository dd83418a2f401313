//! End-to-end tests of the `qdep` binary: artifacts, exit codes,
//! determinism.

use std::path::Path;
use std::process::{Command, Output};

fn qdep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdep"))
        .args(args)
        .env_remove("QDEP_SEED")
        .output()
        .expect("failed to spawn qdep")
}

fn qdep_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qdep"));
    cmd.current_dir(dir).args(args).env_remove("QDEP_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("failed to spawn qdep")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn analyze_ghz_text_shows_one_shared_unitary() {
    let out = qdep(&["analyze", "fixtures:ghz", "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "by qubits (q0:{U1}, q1:{U1}, q2:{U1})\nby 1-qubit unitaries (U1:{q0,q1,q2})\n"
    );
}

#[test]
fn analyze_json_embeds_manifest_and_schema_fields() {
    let out = qdep(&["analyze", "fixtures:ansatz_a", "--format", "json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["manifest"]["tool"], "qdep");
    assert_eq!(value["manifest"]["command"], "analyze");
    assert_eq!(value["n"], 6);
    assert_eq!(value["provenance"], "static");
    // The ring entangler cancels the first unitary on its own qubit.
    assert_eq!(
        value["by_qubit"]["q0"],
        serde_json::json!(["g1", "g2", "g3", "g4", "g5"])
    );
    assert_eq!(value["by_qubit"]["q5"], serde_json::json!(["g0", "g1", "g2", "g3", "g4", "g5"]));
}

#[test]
fn analyze_restrict_keeps_surviving_entries() {
    let out = qdep(&["analyze", "fixtures:ghz", "--restrict", "q0,q1", "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "by qubits (q0:{U1}, q1:{U1})\nby 1-qubit unitaries (U1:{q0,q1})\n"
    );
}

#[test]
fn analyze_missing_file_exits_2() {
    let out = qdep(&["analyze", "missing.qc"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn analyze_parse_error_reports_line_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.qc"), "qubits 2\nh 0\n").unwrap();
    let out = qdep_in(dir.path(), &["analyze", "bad.qc"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("unknown gate kind `h`"));
}

#[test]
fn analyze_accepts_qasm2_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bell.qasm"),
        "OPENQASM 2.0;\nqreg q[2];\nry(1.5707963267948966) q[0];\ncx q[0], q[1];\n",
    )
    .unwrap();
    let out = qdep_in(dir.path(), &["analyze", "bell.qasm", "--format", "text"], &[]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "by qubits (q0:{g0}, q1:{g0})\nby 1-qubit unitaries (g0:{q0,q1})\n"
    );
}

#[test]
fn verify_fig1_is_clean_and_exits_0() {
    let out = qdep(&["verify", "fixtures:fig1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("static_only=0 oracle_only=0"), "{text}");
    assert!(text.contains("result: clean"));
}

#[test]
fn verify_eq16_18_reports_the_divergence_and_exits_0() {
    let out = qdep(&["verify", "fixtures:eq16_18"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("q1     g0     Ua           static_only"), "{text}");
    assert!(text.contains("static_only=1 oracle_only=0"));
}

#[test]
fn verify_is_deterministic_across_reruns_and_jobs() {
    let args = ["verify", "fixtures:fig1", "--samples", "1", "--seed", "7", "--format", "json"];
    let first = qdep(&args);
    let second = qdep(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let one_job = qdep(&["verify", "fixtures:w_state", "--format", "json", "--jobs", "1"]);
    let four_jobs = qdep(&["verify", "fixtures:w_state", "--format", "json", "--jobs", "4"]);
    assert!(one_job.status.success());
    assert_eq!(one_job.stdout, four_jobs.stdout);
}

#[test]
fn verify_seed_env_and_flag_precedence() {
    let via_flag = qdep(&["verify", "fixtures:fig1", "--seed", "7", "--format", "json"]);
    let via_env = qdep_in(
        Path::new("."),
        &["verify", "fixtures:fig1", "--format", "json"],
        &[("QDEP_SEED", "7")],
    );
    let value_flag: serde_json::Value = serde_json::from_str(&stdout(&via_flag)).unwrap();
    let value_env: serde_json::Value = serde_json::from_str(&stdout(&via_env)).unwrap();
    assert_eq!(value_flag["manifest"]["probe"]["seed"], 7);
    assert_eq!(value_flag["divergence"], value_env["divergence"]);

    // An explicit flag beats the environment.
    let flag_wins = qdep_in(
        Path::new("."),
        &["verify", "fixtures:fig1", "--seed", "3", "--format", "json"],
        &[("QDEP_SEED", "7")],
    );
    let value: serde_json::Value = serde_json::from_str(&stdout(&flag_wins)).unwrap();
    assert_eq!(value["manifest"]["probe"]["seed"], 3);
}

#[test]
fn verify_capacity_exceeded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("big.qc"), "qubits 25\n").unwrap();
    let out = qdep_in(dir.path(), &["verify", "big.qc"], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("at most 24"));
    // Static analysis has no such limit.
    let out = qdep_in(dir.path(), &["analyze", "big.qc", "--format", "text"], &[]);
    assert!(out.status.success());
}

#[test]
fn fixtures_list_prints_ten_names() {
    let out = qdep(&["fixtures", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 10);
    for name in ["fig1", "fig2", "ghz", "w_state", "eq4_6", "double_cx", "eq13_15", "eq16_18", "ansatz_a", "ansatz_b"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn fixtures_emit_then_analyze_reproduces_the_picture() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdep_in(dir.path(), &["fixtures", "emit", "w_state", "w.qc"], &[]);
    assert!(out.status.success());
    let out = qdep_in(dir.path(), &["analyze", "w.qc", "--format", "text"], &[]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "by qubits (q0:{Ry(θ1),X}, q1:{Ry(θ1),Ry(θ2),Ry(θ3)}, q2:{Ry(θ1),Ry(θ2),Ry(θ3)})\n\
         by 1-qubit unitaries (Ry(θ1):{q0,q1,q2}, Ry(θ2):{q1,q2}, Ry(θ3):{q1,q2}, X:{q0})\n"
    );
}

#[test]
fn fixtures_emit_unknown_name_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdep_in(dir.path(), &["fixtures", "emit", "nope", "x.qc"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown fixture"));
}

#[test]
fn out_flag_writes_the_artifact_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = qdep_in(
        dir.path(),
        &["analyze", "fixtures:fig1", "--format", "dot", "--out", "fig1.dot"],
        &[],
    );
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let dot = std::fs::read_to_string(dir.path().join("fig1.dot")).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 5);
}
