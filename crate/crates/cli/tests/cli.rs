use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exact-rank"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    exe().args(args).current_dir(dir).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = exe()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn generate_then_rank_through_a_pipe() {
    let dir = tempfile::tempdir().unwrap();
    let generated = run(&["generate", "--family", "homo", "--n", "8", "--delta", "0.1", "--seed", "7"], dir.path());
    let inst = json(&generated);
    assert_eq!(inst["n"], 8);
    assert_eq!(inst["kind"], "matrix");
    assert_eq!(inst["seed_provenance"], "generate family=homo n=8 delta=0.1 seed=7");

    let ranked = json(&run_stdin(&["rank", "--confidence", "0.01", "--seed", "3"], &generated.stdout));
    assert_eq!(ranked["ranking"], inst["true_ranking"]);
    assert_eq!(ranked["correct"], true);
    assert!(ranked["comparisons"].as_u64().unwrap() > 0);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["generate", "--family", "mnl", "--n", "5", "--seed", "1"];
    let stdout = run(&args, dir.path()).stdout;
    let mut with_file = args.to_vec();
    with_file.extend(["-o", "inst.json"]);
    let out = run(&with_file, dir.path());
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(fs::read(dir.path().join("inst.json")).unwrap(), stdout);
}

#[test]
fn correct_is_omitted_without_a_true_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let file = r#"{"n": 3, "kind": "mnl", "scores": [1.0, 5.0, 2.0], "seed_provenance": "hand"}"#;
    fs::write(dir.path().join("i.json"), file).unwrap();
    let ranked = json(&run(&["rank", "--instance", "i.json", "--confidence", "0.05", "--seed", "2"], dir.path()));
    assert_eq!(ranked["ranking"], serde_json::json!([2, 3, 1]));
    assert!(ranked.get("correct").is_none());
}

#[test]
fn deterministic_matrix_instance() {
    // p_ij in {0, 1}: every comparison is decided.
    let file = r#"{"n": 3, "kind": "matrix", "true_ranking": [3, 1, 2],
        "pairwise_probs": [[0.5, 1.0, 0.0], [0.0, 0.5, 0.0], [1.0, 1.0, 0.5]], "seed_provenance": "hand"}"#;
    let ranked = json(&run_stdin(&["rank", "--confidence", "0.1", "--seed", "0"], file.as_bytes()));
    assert_eq!(ranked["ranking"], serde_json::json!([3, 1, 2]));
    assert_eq!(ranked["correct"], true);
}

#[test]
fn lwms_counts_merge_iterations() {
    let dir = tempfile::tempdir().unwrap();
    // Scores far apart: each listwise query is near-deterministic.
    let scores: Vec<String> = (0..9).map(|k| format!("1e{}", 8 * k)).collect();
    let file = format!(r#"{{"n": 9, "kind": "mnl", "scores": [{}], "seed_provenance": "hand"}}"#, scores.join(","));
    fs::write(dir.path().join("i.json"), file).unwrap();
    let args = ["rank", "--instance", "i.json", "--confidence", "0.1", "--seed", "4", "--algorithm", "lwms", "--m", "3"];
    let ranked = json(&run(&args, dir.path()));
    assert_eq!(ranked["comparisons"], 18);
    assert_eq!(ranked["ranking"], serde_json::json!([9, 8, 7, 6, 5, 4, 3, 2, 1]));
}

#[test]
fn diagnose_reports_gaps_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let inst = run(&["generate", "--family", "homo", "--n", "10", "--delta", "0.1", "--seed", "5"], dir.path());
    let diag = json(&run_stdin(&["diagnose", "--confidence", "0.01"], &inst.stdout));
    assert_eq!(diag["sst_holds"], true);
    assert_eq!(diag["delta_tilde_i"].as_array().unwrap().len(), 10);
    let eq2 = diag["bound_eq2"].as_f64().unwrap();
    assert!((eq2 - 7741.787724230093).abs() < 1e-6 * eq2, "{eq2}");
    assert!(diag["bound_eq1"].as_f64().unwrap() > 0.0);
}

#[test]
fn benchmark_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "benchmark", "--family", "homo", "--sweep", "4,6", "--delta", "0.2", "--confidence", "0.05", "--trials", "5",
        "--seed", "1", "-o", "out.csv",
    ];
    let out = run(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("family,n,"));
    assert!(lines[1].starts_with("homo,4,0.2,0.05,iir,5,1,"));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["generate", "--family", "homo", "--n", "5", "--seed", "1"],
        &["generate", "--family", "mnl", "--n", "5", "--delta", "0.1", "--seed", "1"],
        &["generate", "--family", "random", "--n", "5", "--delta", "0.4", "--seed", "1"],
        &["generate", "--family", "homo", "--n", "5", "--delta", "0.1"],
        &["benchmark", "--family", "homo", "--sweep", "5", "--delta", "0.1", "--confidence", "1.5", "--seed", "1"],
        &["rank", "--confidence", "0.1", "--seed", "1", "--algorithm", "lwms"],
    ];
    for args in cases {
        let out = run(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn invalid_benchmark_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "benchmark", "--family", "homo", "--sweep", "5", "--delta", "0.1", "--confidence", "0", "--seed", "1", "-o",
        "out.csv",
    ];
    assert_eq!(run(&args, dir.path()).status.code(), Some(2));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn io_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(&["rank", "--instance", "nope.json", "--confidence", "0.1", "--seed", "1"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
    let garbage = run_stdin(&["diagnose", "--confidence", "0.1"], b"{not json");
    assert_eq!(garbage.status.code(), Some(1));
    let bad_dir = run(&["generate", "--family", "mnl", "--n", "3", "--seed", "1", "-o", "no/such/dir.json"], dir.path());
    assert_eq!(bad_dir.status.code(), Some(1));
}

#[test]
fn exhausted_schedule_exits_with_three() {
    // Gap of 0.001 cannot be resolved in a single attempt with guess 1/4.
    let file = r#"{"n": 2, "kind": "matrix", "pairwise_probs": [[0.5, 0.501], [0.499, 0.5]], "seed_provenance": "hand"}"#;
    let out = run_stdin(&["rank", "--confidence", "0.1", "--seed", "1", "--max-attempts", "1"], file.as_bytes());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn homo_instance_has_uniform_gap() {
    let dir = tempfile::tempdir().unwrap();
    let inst = json(&run(&["generate", "--family", "homo", "--n", "10", "--delta", "0.1", "--seed", "7"], dir.path()));
    let truth: Vec<usize> = inst["true_ranking"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize).collect();
    let probs = &inst["pairwise_probs"];
    for (a, &i) in truth.iter().enumerate() {
        for &j in &truth[a + 1..] {
            assert!((probs[i - 1][j - 1].as_f64().unwrap() - 0.6).abs() < 1e-12);
        }
    }
}

#[test]
fn small_instances() {
    let single = r#"{"n": 1, "kind": "mnl", "scores": [2.0], "seed_provenance": "hand"}"#;
    let ranked = json(&run_stdin(&["rank", "--confidence", "0.1", "--seed", "1"], single.as_bytes()));
    assert_eq!(ranked["ranking"], serde_json::json!([1]));
    assert_eq!(ranked["comparisons"], 0);

    let pair = r#"{"n": 2, "kind": "matrix", "pairwise_probs": [[0.5, 0.99], [0.01, 0.5]], "seed_provenance": "hand"}"#;
    for seed in ["1", "2", "3"] {
        let ranked = json(&run_stdin(&["rank", "--confidence", "0.1", "--seed", seed], pair.as_bytes()));
        assert_eq!(ranked["ranking"], serde_json::json!([1, 2]));
    }
}
