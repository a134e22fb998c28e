mod common;

use common::{run, Case};

#[test]
fn golden_cases() {
    let failures: Vec<String> = common::cases()
        .iter()
        .filter_map(|c: &Case| c.check().err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn vec_devec_round_trip() {
    common::round_trip().unwrap();
}

#[test]
fn selftest_vectorize_passes() {
    let out = run(
        &[],
        &["selftest", "--suite", "vectorize", "--seed", "1"],
        &[],
    );
    assert_eq!(out.code, 0, "{}", out.stdout);
    let lines: Vec<&str> = out.stdout.lines().collect();
    let summary = lines.last().unwrap();
    assert!(summary.starts_with("passed: "), "{summary}");
    let (k, n) = summary["passed: ".len()..].split_once('/').unwrap();
    assert_eq!(k, n);
    for line in &lines[..lines.len() - 1] {
        assert!(line.contains(": PASS"), "{line}");
    }
}

#[test]
fn selftest_is_deterministic() {
    let args = ["selftest", "--suite", "entangle", "--seed", "7"];
    let a = run(&[], &args, &[]);
    let b = run(&[], &args, &[]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bench_prints_csv() {
    let out = run(
        &[],
        &[
            "bench",
            "--dim",
            "2",
            "--kraus-rank",
            "2",
            "--chain-length",
            "3",
            "--trials",
            "1",
            "--seed",
            "5",
        ],
        &[],
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(
        lines[0],
        "dim,kraus_rank,chain_length,t_rmatrix_ns,t_nested_ns,max_deviation,seed"
    );
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 7);
    assert_eq!(&fields[..3], &["2", "2", "3"]);
    assert_eq!(fields[6], "5");
    let dev: f64 = fields[5].parse().unwrap();
    assert!(dev <= 1e-8);
}

#[test]
fn reads_standard_input() {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let mut child = Command::new(common::BIN)
        .args(["vec", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(common::identity2().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("\"rows\": 4"));
}
