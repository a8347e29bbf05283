//! End-to-end checks of the `choicewalk` binary: exit codes, metadata,
//! reproducibility, and the documented example invocations.

use std::path::Path;
use std::process::{Command, Output};

use choicewalk_cli::output::reproducible_body;
use choicewalk_cli::RunConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_choicewalk"))
}

fn run_ok(args: &[&str]) -> String {
    let output = bin().args(args).output().expect("binary runs");
    assert!(
        output.status.success(),
        "exit {:?} for {args:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf-8 output")
}

fn run_expect(args: &[&str], code: i32) -> Output {
    let output = bin().args(args).output().expect("binary runs");
    assert_eq!(
        output.status.code(),
        Some(code),
        "args {args:?}: stderr {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    reader
        .records()
        .map(|record| record.unwrap().iter().map(|s| s.to_string()).collect())
        .collect()
}

#[test]
fn threshold_example_recovers_the_dictator_median() {
    let text = run_ok(&[
        "threshold",
        "--family",
        "dictator:n=1000,i=0",
        "--process",
        "solo",
        "--trials",
        "2000",
        "--seed",
        "7",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let point: i64 = rows[0][3].parse().unwrap();
    // Loose window; the tight closed-form check runs in the acceptance
    // suite with far more trials.
    assert!((450..=550).contains(&point), "point {point}");
    let lo: i64 = rows[0][4].parse().unwrap();
    let hi: i64 = rows[0][5].parse().unwrap();
    assert!(lo <= point && point <= hi);
}

#[test]
fn exact_example_emits_the_full_curve() {
    let text = run_ok(&[
        "exact",
        "--family",
        "recursive_majority:k=3,t=2",
        "--mode",
        "solo",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 10, "t = 0..=9");
    assert_eq!(rows[9][1], "1");
    assert!(text.contains("# note: threshold: 5"));
}

#[test]
fn census_example_matches_the_expected_fraction() {
    let text = run_ok(&[
        "census", "--n", "100000", "--r", "2", "--eps", "0.3", "--seed", "1",
    ]);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let never: f64 = rows[0][4].parse().unwrap();
    assert!((never - 0.49).abs() < 0.01, "never fraction {never}");
}

#[test]
fn identical_invocations_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let args = |csv: &Path, svg: &Path| {
        vec![
            "curve".to_string(),
            "--family".into(),
            "tribes:n=27,s=3".into(),
            "--process".into(),
            "rchoice".into(),
            "--r".into(),
            "2".into(),
            "--trials".into(),
            "800".into(),
            "--grid".into(),
            "0:27:3".into(),
            "--out".into(),
            csv.display().to_string(),
            "--svg".into(),
            svg.display().to_string(),
        ]
    };
    let status = bin()
        .args(args(&csv, &svg))
        .env("CHOICEWALK_WORKERS", "4")
        .status()
        .unwrap();
    assert!(status.success());
    let first_csv = std::fs::read_to_string(&csv).unwrap();
    let first_svg = std::fs::read(&svg).unwrap();
    let status = bin()
        .args(args(&csv, &svg))
        .env("CHOICEWALK_WORKERS", "1")
        .status()
        .unwrap();
    assert!(status.success());
    let second_csv = std::fs::read_to_string(&csv).unwrap();
    let second_svg = std::fs::read(&svg).unwrap();
    assert_eq!(
        reproducible_body(&first_csv),
        reproducible_body(&second_csv),
        "CSV bodies diverged across worker counts"
    );
    assert_eq!(first_svg, second_svg, "SVG bytes diverged");
    assert!(first_svg.starts_with(b"<svg"));
}

#[test]
fn emitted_config_reproduces_the_run() {
    let text = run_ok(&[
        "simulate",
        "--family",
        "majority:n=15",
        "--process",
        "rcomplete",
        "--r",
        "3",
        "--trials",
        "50",
        "--seed",
        "99",
    ]);
    let config_line = text
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .expect("config line present");
    let config = RunConfig::from_json(config_line).expect("config parses");
    assert_eq!(config.command, "simulate");
    assert_eq!(config.seed, 99);
    assert_eq!(config.process.as_deref(), Some("rcomplete:r=3"));
    // Re-run with the arguments the config describes and compare bodies.
    let again = run_ok(&[
        "simulate",
        "--family",
        &config.families[0],
        "--process",
        "rcomplete",
        "--r",
        "3",
        "--trials",
        "50",
        "--seed",
        "99",
    ]);
    assert_eq!(reproducible_body(&text), reproducible_body(&again));
}

#[test]
fn json_output_is_well_formed() {
    let text = run_ok(&[
        "exact",
        "--family",
        "tribes:n=8,s=2",
        "--mode",
        "optimal",
        "--r",
        "2",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert_eq!(doc["config"]["command"], "exact");
    assert_eq!(doc["columns"][0], "t");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn exit_codes_separate_usage_from_capacity() {
    run_expect(&["threshold"], 1); // missing --family
    run_expect(&["threshold", "--family", "nonsense:n=3"], 1);
    run_expect(&["exact", "--family", "majority:n=41", "--mode", "solo"], 2);
    run_expect(
        &[
            "exact",
            "--family",
            "majority:n=13",
            "--mode",
            "optimal",
            "--r",
            "0",
        ],
        1,
    );
    let output = run_expect(&["simulate", "--family", "tribes:n=9,s=5"], 1);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("error:"), "stderr: {stderr}");
    run_expect(&["--help"], 0);
    run_expect(&["--version"], 0);
}

#[test]
fn random_seed_is_recorded_for_reproduction() {
    let first = run_ok(&[
        "simulate", "--family", "or:n=10", "--trials", "5", "--seed", "random",
    ]);
    let config_line = first
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .unwrap();
    let config = RunConfig::from_json(config_line).unwrap();
    let seed = config.seed.to_string();
    let again = run_ok(&[
        "simulate", "--family", "or:n=10", "--trials", "5", "--seed", &seed,
    ]);
    assert_eq!(reproducible_body(&first), reproducible_body(&again));
}

#[test]
fn progress_stays_on_stderr() {
    let output = bin()
        .args([
            "ratio",
            "--family",
            "dictator:n={},i=0",
            "--ns",
            "30,60",
            "--policy",
            "greedy_useful",
            "--trials",
            "200",
            "--seed",
            "4",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("ratio: dictator:n=30,i=0 done"));
    assert!(!stdout.contains("done ("), "progress leaked to stdout");
    assert!(stdout.contains("family,n,r,policy,T1"));
}
