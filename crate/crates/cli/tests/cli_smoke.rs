//! End-to-end runs of the `matball` binary: generation, evaluation, operations,
//! verification, and report aggregation, including exit-code semantics.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use matball::colligation::theta_eval;
use matball::ToleranceConfig;
use matball_cli::{parse_colligation, parse_matrix, parse_report, render_matrix};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matball"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout_line(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap().trim().to_string()
}

fn write_gen(dir: &Path, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let out_flag = path.to_str().unwrap().to_string();
    full.extend_from_slice(&["--out", &out_flag]);
    run_ok(&full);
    path
}

#[test]
fn gen_eval_pipeline_matches_library() {
    let tol = ToleranceConfig::default();
    let dir = tempfile::tempdir().unwrap();
    let g_path = write_gen(
        dir.path(),
        "g.json",
        &["--kind", "colligation", "--alpha", "2", "--m", "2", "--j", "1", "--seed", "5"],
    );
    let s_path = write_gen(
        dir.path(),
        "s.json",
        &["--kind", "ball-point", "--m", "2", "--seed", "6"],
    );
    let out = run_ok(&[
        "eval",
        "--colligation",
        g_path.to_str().unwrap(),
        "--point",
        s_path.to_str().unwrap(),
    ]);
    let g = parse_colligation(fs::read_to_string(&g_path).unwrap().trim(), &tol).unwrap();
    let s = parse_matrix(fs::read_to_string(&s_path).unwrap().trim()).unwrap();
    let expected = render_matrix(&theta_eval(&g, &s, &tol).unwrap());
    assert_eq!(stdout_line(&out), expected);
}

#[test]
fn sum_then_split_round_trips_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_gen(
        dir.path(),
        "a.json",
        &["--kind", "colligation", "--alpha", "1", "--m", "2", "--j", "1", "--seed", "11"],
    );
    let b = write_gen(
        dir.path(),
        "b.json",
        &["--kind", "colligation", "--alpha", "2", "--m", "2", "--j", "2", "--seed", "12"],
    );
    let sum_path = dir.path().join("sum.json");
    run_ok(&[
        "op",
        "sum",
        "--lhs",
        a.to_str().unwrap(),
        "--rhs",
        b.to_str().unwrap(),
        "--out",
        sum_path.to_str().unwrap(),
    ]);
    let tol = ToleranceConfig::default();
    let sum = parse_colligation(fs::read_to_string(&sum_path).unwrap().trim(), &tol).unwrap();
    assert_eq!((sum.alpha, sum.m, sum.j), (3, 2, 3));

    let out = run_ok(&["op", "split", "--input", sum_path.to_str().unwrap(), "--alpha1", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let parts: Vec<_> = text.lines().collect();
    assert_eq!(parts.len(), 2);
    let p1 = parse_colligation(parts[0], &tol).unwrap();
    let p2 = parse_colligation(parts[1], &tol).unwrap();
    assert_eq!(p1.alpha, 1);
    assert_eq!(p2.alpha, 2);
}

#[test]
fn compose_and_tensor_have_expected_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let outer = write_gen(
        dir.path(),
        "outer.json",
        &["--kind", "colligation", "--alpha", "1", "--m", "2", "--j", "2", "--seed", "21"],
    );
    let inner = write_gen(
        dir.path(),
        "inner.json",
        &["--kind", "colligation", "--alpha", "2", "--m", "3", "--j", "1", "--seed", "22"],
    );
    let tol = ToleranceConfig::default();
    let out = run_ok(&[
        "op",
        "compose",
        "--lhs",
        outer.to_str().unwrap(),
        "--rhs",
        inner.to_str().unwrap(),
    ]);
    let composed = parse_colligation(&stdout_line(&out), &tol).unwrap();
    assert_eq!((composed.alpha, composed.m, composed.j), (1, 3, 2));

    let out = run_ok(&[
        "op",
        "tensor",
        "--lhs",
        outer.to_str().unwrap(),
        "--rhs",
        outer.to_str().unwrap(),
    ]);
    let squared = parse_colligation(&stdout_line(&out), &tol).unwrap();
    assert_eq!((squared.alpha, squared.m), (1, 2));
}

#[test]
fn repn_build_reports_dimensions() {
    let out = run_ok(&["repn", "build", "--n", "3", "--signature", "2,1,0", "--seed", "4"]);
    let line = stdout_line(&out);
    assert!(line.contains("\"dim\":8"), "unexpected build summary: {line}");
    assert!(line.contains("\"ambient_dim\":9"), "unexpected build summary: {line}");
}

#[test]
fn verify_passes_and_unknown_theorem_is_an_error() {
    let out = run_ok(&["verify", "--theorem", "T2", "--trials", "20", "--seed", "3"]);
    let report = parse_report(&stdout_line(&out)).unwrap();
    assert!(report.pass);
    assert_eq!(report.theorem_id, "T2");
    assert_eq!(report.trials, 20);
    assert_eq!(report.runtime_ms, None);

    let out = bin().args(["verify", "--theorem", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown theorem"));
}

#[test]
fn verify_timing_flag_adds_runtime() {
    let out = run_ok(&["verify", "--theorem", "P21", "--trials", "10", "--seed", "3", "--timing"]);
    let report = parse_report(&stdout_line(&out)).unwrap();
    assert!(report.runtime_ms.is_some());
}

#[test]
fn report_aggregation_gates_on_failures() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.jsonl");
    run_ok(&[
        "verify",
        "--theorem",
        "T3",
        "--theorem",
        "P21",
        "--trials",
        "15",
        "--seed",
        "8",
        "--out",
        good.to_str().unwrap(),
    ]);
    let out = run_ok(&["report", good.to_str().unwrap()]);
    assert!(stdout_line(&out).contains("\"failed\":[]"));

    let mixed = dir.path().join("mixed.jsonl");
    let mut lines = fs::read_to_string(&good).unwrap();
    lines.push_str(
        "{\"theorem_id\":\"T4\",\"trials\":10,\"max_error\":1.0,\"skipped\":0,\"pass\":false,\"seed\":1}\n",
    );
    fs::write(&mixed, lines).unwrap();
    let out = bin().args(["report", mixed.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"failed\":[\"T4\"]"));
}

#[test]
fn environment_seed_drives_generation() {
    let sample = |seed: &str| {
        let out = bin()
            .env("COLLIG_SEED", seed)
            .args(["gen", "--kind", "unitary", "--n", "2"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(sample("42"), sample("42"));
    assert_ne!(sample("42"), sample("43"));

    let out = bin()
        .env("COLLIG_SEED", "not-a-number")
        .args(["gen", "--kind", "unitary", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn multi_document_files_are_rejected_by_eval() {
    let dir = tempfile::tempdir().unwrap();
    let many = write_gen(
        dir.path(),
        "many.json",
        &["--kind", "colligation", "--alpha", "1", "--m", "1", "--j", "1", "--count", "2"],
    );
    let point = write_gen(dir.path(), "pt.json", &["--kind", "ball-point", "--m", "1"]);
    let out = bin()
        .args([
            "eval",
            "--colligation",
            many.to_str().unwrap(),
            "--point",
            point.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
