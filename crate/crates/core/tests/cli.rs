use std::io::Write;
use std::process::{Command, Output};

use rational_ba::cli::Record;
use rational_ba::{golden, json, presets};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rational-ba")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn validate_preset_succeeds() {
    let o = run(&["validate", "--preset", "gamma-n2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("valid gamma data"));
}

#[test]
fn flipped_a_names_the_identity() {
    let f = temp_file(&presets::GAMMA_N2.replace("A = \"1\"", "A = \"2\""));
    let o = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("f(1,0,t) = A·f(0,1,P t)"), "{}", stdout(&o));
}

#[test]
fn malformed_toml_is_a_usage_error() {
    let f = temp_file("[gamma\nn = 2");
    assert_eq!(run(&["validate", f.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["validate", "/nonexistent/config.toml"]).status.code(), Some(2));
}

#[test]
fn gamma_lambda1_is_diagonal() {
    let o = run(&["operator", "--preset", "gamma-n2", "--lambda", "num = 2*(z1*t2 + z2*t1); d = 1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[11] ∂x - ∂y") && text.contains("[22] ∂x - ∂y"), "{text}");
    assert!(text.contains("[12] 0") && text.contains("[21] 0"), "{text}");
}

#[test]
fn omega_check_passes() {
    let o = run(&["operator", "--preset", "omega", "--check", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<Record> = stdout(&o).lines().map(|l| json::from_line(l).unwrap()).collect();
    let commutators = records.iter().filter(|r| matches!(r, Record::Commutator { zero: true, .. })).count();
    assert_eq!(commutators, 6);
}

#[test]
fn non_descending_lambda_fails() {
    let o = run(&["operator", "--preset", "gamma-n2", "--lambda", "num = z1*t1; d = 1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("does not descend"), "{}", stderr(&o));
}

#[test]
fn reproduce_gamma_matches() {
    let o = run(&["reproduce", "gamma-n2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn tampered_golden_file_is_located() {
    let f = temp_file(&golden::GAMMA_N2.replace("[\"-1/2*(dx + dy)\"", "[\"-1/2*(dx - dy)\""));
    let o = run(&["reproduce", "gamma-n2", "--golden", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let records: Vec<Record> = stdout(&o).lines().map(|l| json::from_line(l).unwrap()).collect();
    assert!(records.iter().any(|r| matches!(r, Record::Mismatch { row: 2, col: 1, .. })));
}

#[test]
fn commute_and_module_basis() {
    assert_eq!(run(&["commute", "--preset", "gamma-n2"]).status.code(), Some(0));
    let o = run(&["module-basis", "--preset", "gamma-n3", "--grade", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert_eq!(json::from_line::<Record>(&last).unwrap(), Record::Grade { grade: 2, dimension: 12, expected: 12 });
}

#[test]
fn embed_check_is_reproducible() {
    let a = run(&["embed-check", "--variety", "gamma", "--samples", "40", "--seed", "3"]);
    let b = run(&["embed-check", "--variety", "gamma", "--samples", "40", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(run(&["embed-check", "--variety", "omega", "--samples", "40"]).status.code(), Some(0));
    assert_eq!(run(&["embed-check", "--variety", "torus"]).status.code(), Some(2));
}

#[test]
fn json_output_reserializes_byte_identically() {
    for args in [
        vec!["validate", "--preset", "omega", "--format", "json"],
        vec!["module-basis", "--preset", "omega", "--format", "json"],
        vec!["reproduce", "omega", "--format", "json"],
        vec!["embed-check", "--variety", "omega", "--samples", "10"],
    ] {
        let o = run(&args);
        for line in stdout(&o).lines() {
            let r: Record = json::from_line(line).unwrap();
            assert_eq!(json::to_line(&r), line);
        }
    }
}
