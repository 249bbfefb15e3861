use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const ANGELESCO: &str = r#"
[system]
kind = "angelesco"

[[system.measures]]
atoms = [["-3/4", "1/2"], ["-1/4", "1/2"]]
interval = ["-1", "0"]

[[system.measures]]
atoms = [["1/4", "1/2"], ["3/4", "1/2"]]
interval = ["0", "1"]
"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn records(&self) -> Vec<Value> {
        self.stdout.lines().map(|l| serde_json::from_str(l).expect("stdout line is JSON")).collect()
    }
}

fn config(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn moprl(config: &Path, args: &[&str]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_moprl"));
    cmd.arg(args[0]).arg("--config").arg(config).args(&args[1..]);
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    Run {
        code: status.code().expect("exited normally"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn angelesco(dir: &TempDir) -> PathBuf {
    config(dir, "angelesco.toml", ANGELESCO)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

fn without_timing(records: &[Value]) -> Vec<Value> {
    records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.as_object_mut().unwrap().remove("timing");
            r
        })
        .collect()
}

#[test]
fn moments_rows() {
    let dir = TempDir::new().unwrap();
    let run = moprl(&angelesco(&dir), &["moments", "--max-k", "2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let recs = run.records();
    assert_eq!(recs.len(), 1);
    let rows = recs[0]["outputs"]["moments"].as_array().unwrap();
    assert_eq!(strings(&rows[0]), ["1", "-1/2", "5/16"]);
    assert_eq!(strings(&rows[1]), ["1", "1/2", "5/16"]);
}

#[test]
fn solve_both_types() {
    let dir = TempDir::new().unwrap();
    let cfg = angelesco(&dir);
    let run = moprl(&cfg, &["solve", "--index", "1,1", "--index", "0,0"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let recs = run.records();
    assert_eq!(strings(&recs[0]["outputs"]["coefficients"]), ["-5/16", "0", "1"]);
    assert_eq!(strings(&recs[1]["outputs"]["coefficients"]), ["1"]);
    assert_eq!(recs[0]["index"], serde_json::json!([1, 1]));

    let run = moprl(&cfg, &["solve", "--index", "1,1", "--type", "i"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let polys = run.records()[0]["outputs"]["coefficients"].clone();
    assert_eq!(polys, serde_json::json!([["-1"], ["1"]]));
}

#[test]
fn non_normal_solve_exits_2() {
    let dir = TempDir::new().unwrap();
    // two copies of one measure: every index with both parts positive is singular
    let cfg = config(
        &dir,
        "twin.toml",
        r#"
[system]
kind = "explicit"

[[system.measures]]
atoms = [["0", "1/3"], ["1", "1/3"], ["2", "1/3"]]

[[system.measures]]
atoms = [["0", "1/3"], ["1", "1/3"], ["2", "1/3"]]
"#,
    );
    let run = moprl(&cfg, &["solve", "--index", "1,1"]);
    assert_eq!(run.code, 2, "{}\n{}", run.stdout, run.stderr);
    let rec = &run.records()[0];
    assert_eq!(rec["status"], "notnormal");
    assert!(rec["error"].as_str().is_some());
}

#[test]
fn zeros_are_flagged_with_their_interval() {
    let dir = TempDir::new().unwrap();
    let run = moprl(&angelesco(&dir), &["zeros", "--index", "1,1", "--width", "1/100"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let roots = run.records()[0]["outputs"]["polynomial"]["roots"].as_array().unwrap().clone();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[0]["interval"], 1);
    assert_eq!(roots[1]["interval"], 2);
    for r in &roots {
        let lo = moprl::rational::parse_rational(r["lo"].as_str().unwrap()).unwrap();
        let hi = moprl::rational::parse_rational(r["hi"].as_str().unwrap()).unwrap();
        assert!(&hi - &lo < moprl::rational::rat(1, 100));
    }

    let run = moprl(&angelesco(&dir), &["zeros", "--index", "0,0"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.records()[0]["outputs"]["polynomial"]["roots"], serde_json::json!([]));
}

#[test]
fn verify_zero_criterion_over_a_grid() {
    let dir = TempDir::new().unwrap();
    let run = moprl(&angelesco(&dir), &["verify", "--criterion", "zero-ii", "--grid", "2,2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let recs = run.records();
    assert_eq!(recs.len(), 9);
    let passed = recs.iter().filter(|r| r["status"] == "pass").count();
    let skipped = recs.iter().filter(|r| r["status"] == "skipped").count();
    assert_eq!(passed + skipped, 9);
    // two atoms per measure: the linear transform leaves room only for n_j <= 1
    assert!(passed >= 4, "{}", run.stdout);
}

#[test]
fn verify_andreief_fixture() {
    let dir = TempDir::new().unwrap();
    let text = format!(
        "{ANGELESCO}\n[verify]\ncriterion = \"andreief\"\n\n[verify.andreief]\natoms = [[\"0\", \"1/2\"], [\"1\", \"1/2\"]]\nphis = [[\"1\"], [\"0\", \"1\"]]\npsis = [[\"1\"], [\"0\", \"1\"]]\n"
    );
    let run = moprl(&config(&dir, "andreief.toml", &text), &["verify"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rec = &run.records()[0];
    assert_eq!(rec["status"], "pass");
    let lhs = rec["outputs"]["witnesses"].as_array().unwrap().iter().find(|w| w["label"] == "lhs").unwrap();
    assert_eq!(lhs["value"], "1/4");
}

#[test]
fn odd_even_wronskian_path_is_a_hypothesis_violation() {
    let dir = TempDir::new().unwrap();
    let text = format!("{ANGELESCO}\n[verify]\ncriterion = \"even-wronskian\"\nsteps = [1, 2]\n");
    let run = moprl(&config(&dir, "odd.toml", &text), &["verify", "--index", "1,1"]);
    assert_eq!(run.code, 3, "{}\n{}", run.stdout, run.stderr);
    assert_eq!(run.records()[0]["status"], "hypothesis");
    assert!(run.stderr.contains("odd"), "{}", run.stderr);
}

#[test]
fn unknown_criterion_and_bad_rationals_exit_1() {
    let dir = TempDir::new().unwrap();
    let run = moprl(&angelesco(&dir), &["verify", "--criterion", "nope", "--index", "1,1"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("zero-ii"), "{}", run.stderr);

    let bad = config(&dir, "bad.toml", &ANGELESCO.replace("[\"-1/4\", \"1/2\"]", "[\"-1/4\", \"1/0\"]"));
    let run = moprl(&bad, &["moments"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("system.measures[0].atoms[1][1]"), "{}", run.stderr);

    let float = config(&dir, "float.toml", &ANGELESCO.replace("\"-1/4\", \"1/2\"", "-0.25, \"1/2\""));
    assert_eq!(moprl(&float, &["moments"]).code, 1);
}

#[test]
fn scan_two_by_two() {
    let dir = TempDir::new().unwrap();
    let run = moprl(&angelesco(&dir), &["scan", "--grid", "1,1"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let mut reader = csv::Reader::from_reader(run.stdout.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["index", "status", "det_sign", "zero_count", "zero_midpoints", "zero_midpoints_decimal"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let order: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(order, ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
    for r in &rows {
        assert_eq!((&r[1], &r[2]), ("normal", "1"), "{r:?}");
    }
    assert_eq!(&rows[3][3], "2");
}

#[test]
fn scan_marks_insufficient_support_and_handles_empty_grids() {
    let dir = TempDir::new().unwrap();
    let run = moprl(&angelesco(&dir), &["scan", "--grid", "3,3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let last = run.stdout.lines().last().unwrap();
    assert!(last.contains("insufficient support"), "{last}");

    let empty = config(&dir, "empty.toml", &format!("indices = []\n{ANGELESCO}"));
    let run = moprl(&empty, &["scan"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(run.stdout.lines().count(), 1);
}

#[test]
fn out_directory_receives_records_and_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    let run = moprl(&angelesco(&dir), &["scan", "--grid", "1,1", "--out", out.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let jsonl = std::fs::read_to_string(out.join("scan.jsonl")).unwrap();
    let csv = std::fs::read_to_string(out.join("scan.csv")).unwrap();
    assert_eq!(jsonl.lines().count(), 4);
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(run.stdout, jsonl);
}

#[test]
fn reruns_are_identical_and_fingerprints_round_trip() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "random.toml", "seed = 5\n\n[system]\nkind = \"random\"\nfamily = \"nikishin\"\n");
    let a = moprl(&cfg, &["verify", "--criterion", "nikishin-location", "--grid", "2,2", "--j", "2"]);
    let b = moprl(&cfg, &["verify", "--criterion", "nikishin-location", "--grid", "2,2", "--j", "2"]);
    assert_eq!(without_timing(&a.records()), without_timing(&b.records()));
    assert!(a.records().iter().all(|r| r["seed"] == 5));

    // the canonical serialization of the resolved system rebuilds to the
    // same fingerprint
    let system = moprl_cli::config::RunConfig::parse(&std::fs::read_to_string(&cfg).unwrap())
        .unwrap()
        .system
        .build(5)
        .unwrap();
    let canonical = config(&dir, "canonical.toml", &moprl_cli::config::canonical_text(&system));
    let c = moprl(&canonical, &["moments"]);
    assert_eq!(c.records()[0]["system"], a.records()[0]["system"]);
    assert_eq!(c.records()[0]["system"].as_str().unwrap(), moprl_cli::config::fingerprint(&system));
}

#[test]
fn rational_strings_match_the_documented_shape() {
    let dir = TempDir::new().unwrap();
    let run = moprl(&angelesco(&dir), &["zeros", "--index", "2,1", "--type", "ii"]);
    let shape = |s: &str| {
        let (num, den) = s.split_once('/').unwrap_or((s, "1"));
        let digits = num.strip_prefix('-').unwrap_or(num);
        !digits.is_empty()
            && digits.bytes().all(|b| b.is_ascii_digit())
            && !den.starts_with('0')
            && den.bytes().all(|b| b.is_ascii_digit())
    };
    for r in run.records()[0]["outputs"]["polynomial"]["roots"].as_array().unwrap() {
        for key in ["lo", "hi", "midpoint"] {
            assert!(shape(r[key].as_str().unwrap()), "{r}");
        }
    }
}
