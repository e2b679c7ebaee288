use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use cmloops_cli::config::Format;
use cmloops_cli::output::data_section;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cmloops"));
    c.env_remove("CMLOOPS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn moments_of_k4() {
    let v = json(&["moments", "--regular", "4", "3"]);
    assert_eq!(v["data"]["limits"]["lambda_s"]["exact"], "12/11");
    assert_eq!(v["data"]["limits"]["lambda_m"]["exact"], "12/11");
    assert_eq!(v["meta"]["config"]["seed"], 1);
    assert_eq!(v["meta"]["tool"], "cmloops");
}

#[test]
fn moments_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let ones = write(dir.path(), "ones.txt", "# all ones\n1\n1\n1\n1\n1\n1\n");
    let v = json(&["moments", "--degrees", &ones]);
    assert_eq!(v["data"]["moments"]["all"]["nu"]["exact"], "0");
    assert_eq!(v["data"]["limits"]["bounds"]["bound_s"]["exact"], "0");

    let odd = write(dir.path(), "odd.txt", "3\n3\n3\n");
    let out = run(&["moments", "--degrees", &odd]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));

    let bad = write(dir.path(), "bad.txt", "3\n3\nthree\n");
    let out = run(&["moments", "--degrees", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let missing = dir.path().join("missing.txt");
    let out = run(&["moments", "--degrees", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn directed_and_bipartite_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let dd = write(dir.path(), "dir.txt", "2,2\n2,2\n");
    let v = json(&["enumerate", "--degrees", &dd, "--flavor", "dcm"]);
    assert_eq!(v["data"]["lambda_m"]["exact"], "1/3");
    assert_eq!(v["data"]["first_moment_m"], true);

    let l = write(dir.path(), "l.txt", "2\n1\n");
    let r = write(dir.path(), "r.txt", "2\n1\n");
    let v = json(&["enumerate", "--degrees", &l, "--degrees-right", &r, "--flavor", "bcm"]);
    assert_eq!(v["data"]["lambda_m"]["exact"], "1/3");
    assert_eq!(v["data"]["configurations"], 6);

    let out = run(&["enumerate", "--degrees", &l, "--flavor", "bcm"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_examples_and_cap() {
    let v = json(&["enumerate", "--regular", "2", "2"]);
    let joint = v["data"]["joint"].as_array().unwrap();
    let find = |s: u64, m: u64| {
        joint
            .iter()
            .find(|e| e["s"] == s && e["m"] == m)
            .map(|e| e["probability"]["exact"].clone())
    };
    assert_eq!(find(2, 0), Some("1/3".into()));
    assert_eq!(find(0, 1), Some("2/3".into()));

    let v = json(&["enumerate", "--regular", "4", "3"]);
    assert_eq!(v["data"]["graph_count"], "1");

    let out = run(&["enumerate", "--regular", "6", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["enumerate", "--regular", "2", "2", "--cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn undefined_lambda_exits_with_four() {
    let out = run(&["montecarlo", "--regular", "1", "2", "--reps", "3"]);
    assert_eq!(out.status.code(), Some(4));
    let out = run(&["moments", "--regular", "1", "2"]);
    assert!(out.status.success());
}

#[test]
fn invalid_flags_exit_with_two() {
    assert_eq!(run(&["montecarlo", "--regular", "10", "3", "--reps", "0"]).status.code(), Some(2));
    assert_eq!(run(&["cramer-wold", "--regular", "10", "3", "--p", "2"]).status.code(), Some(2));
    assert_eq!(run(&["montecarlo"]).status.code(), Some(2));
    assert_eq!(
        run(&["montecarlo", "--regular", "10", "3", "--powerlaw", "10", "2.5", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["moments", "--powerlaw", "10", "0.5", "1"]).status.code(), Some(2));
}

#[test]
fn montecarlo_single_replicate_and_determinism() {
    let args = ["montecarlo", "--regular", "50", "3", "--reps", "1", "--format", "csv"];
    let out = run(&args);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.split("[replicates]\n").nth(1).unwrap().lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0,"));

    let args = ["montecarlo", "--regular", "50", "3", "--reps", "200", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let base = ["montecarlo", "--regular", "40", "3", "--reps", "50"];
    let env_out = bin().args(base).env("CMLOOPS_SEED", "77").output().unwrap();
    let flag_out = run(&[&base[..], &["--seed", "77"]].concat());
    assert_eq!(env_out.stdout, flag_out.stdout);
    let both = bin().args(base).args(["--seed", "5"]).env("CMLOOPS_SEED", "77").output().unwrap();
    let v: Value = serde_json::from_slice(&both.stdout).unwrap();
    assert_eq!(v["meta"]["config"]["seed"], 5);
}

#[test]
fn cramer_wold_reductions() {
    let v = json(&["cramer-wold", "--regular", "200", "3", "--reps", "500", "--p", "0", "--q", "0"]);
    assert_eq!(v["data"]["tv"], 0.0);
    let cw = json(&["cramer-wold", "--regular", "200", "3", "--reps", "500", "--p", "1", "--q", "0"]);
    let mc = json(&["montecarlo", "--regular", "200", "3", "--reps", "500"]);
    assert_eq!(cw["data"]["tv"], mc["data"]["summary"]["tv_s"]);
}

#[test]
fn clt_rules() {
    let v = json(&["clt", "--regular", "10", "3", "--reps", "50"]);
    let warnings = v["data"]["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("small")));
    // d_max^2 = 9 > ell/4 = 7.5
    assert_eq!(v["data"]["m_scores_emitted"], false);
    let v = json(&["clt", "--regular", "12", "3", "--reps", "50"]);
    assert_eq!(v["data"]["m_scores_emitted"], true);
    assert!(v["data"]["ks_m"].is_number());
}

#[test]
fn erased_trivial_sequences() {
    let v = json(&["erased", "--regular", "8", "1", "--reps", "20"]);
    assert_eq!(v["data"]["mean_removed"], 0.0);
    let v = json(&["erased", "--regular", "1", "2", "--reps", "20"]);
    assert_eq!(v["data"]["mean_removed"], 1.0);
    assert_eq!(v["data"]["removed_fraction"], 1.0);
}

#[test]
fn output_file_and_csv_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&[
        "moments",
        "--regular",
        "4",
        "3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# tool: cmloops"));
    assert!(text.contains("# config: {"));
    assert!(text.contains("lambda_s,1.0909090909090908,12/11"));
}

#[test]
fn data_sections_ignore_thread_count() {
    for format in ["csv", "json"] {
        let run_with = |threads: &str| {
            let out = run(&[
                "montecarlo",
                "--regular",
                "100",
                "3",
                "--reps",
                "300",
                "--threads",
                threads,
                "--format",
                format,
            ]);
            String::from_utf8(out.stdout).unwrap()
        };
        let (a, b) = (run_with("1"), run_with("3"));
        assert_ne!(a, b);
        let f = if format == "csv" { Format::Csv } else { Format::Json };
        assert_eq!(data_section(&a, f), data_section(&b, f));
    }
}
