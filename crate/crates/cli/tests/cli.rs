//! End-to-end checks of the `qslab` binary.

use std::process::Command;

fn qslab(args: &[&str]) -> (String, String, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_qslab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.success(),
    )
}

#[test]
fn analyze_json_schema() {
    let (stdout, _, ok) = qslab(&["analyze", "--t", "1,1,1", "--json"]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    for key in [
        "t", "k", "H", "a_C", "a_S", "a_BC", "a_SE", "ratio_C", "ratio_S", "ratio_BC", "ratio_SE",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["t"], serde_json::json!([1, 1, 1]));
    assert!((v["ratio_SE"].as_f64().unwrap() - 80.0 / 57.0).abs() < 1e-12);
}

#[test]
fn bench_csv_is_bit_identical() {
    let args = [
        "bench", "--algo", "yqs", "--t", "1,1,1", "--w", "7", "--n-min", "2^5", "--n-max", "2^7",
        "--trials", "5", "--seed", "123", "--out", "-",
    ];
    let (a, _, ok_a) = qslab(&args);
    let (b, _, ok_b) = qslab(&args);
    assert!(ok_a && ok_b);
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,measure,phase,mean,stderr,asymptotic,truncated"
    );
    // 3 sizes x 4 measures x 4 phase rows
    assert_eq!(lines.count(), 48);
    assert!(a.ends_with('\n'));
    assert!(!a.contains('\r'));
}

#[test]
fn sort_verify_and_cache() {
    let (stdout, _, ok) = qslab(&[
        "sort",
        "--algo",
        "cqs",
        "--n",
        "500",
        "--t",
        "1,2",
        "--w",
        "5",
        "--seed",
        "3",
        "--verify",
        "--cache-m",
        "64",
        "--cache-b",
        "4",
    ]);
    assert!(ok);
    assert!(stdout.contains("verified"));
    assert!(stdout.contains("cache_misses"));
}

#[test]
fn rejects_bad_configuration() {
    let (_, stderr, ok) = qslab(&[
        "sort", "--algo", "yqs", "--n", "10", "--t", "1,1,1", "--w", "3",
    ]);
    assert!(!ok);
    assert!(stderr.contains("w = 3"), "got: {stderr}");

    let (_, stderr, ok) = qslab(&["oracle", "--n", "12", "--t", "0,0,0", "--w", "2"]);
    assert!(!ok);
    assert!(stderr.contains("n <= 9"), "got: {stderr}");

    let (_, stderr, ok) = qslab(&[
        "sort", "--algo", "cqs", "--n", "10", "--t", "1,1,1", "--w", "5",
    ]);
    assert!(!ok);
    assert!(stderr.contains("expected T1,T2"), "got: {stderr}");
}

#[test]
fn compare_flags_unrepresentable_k() {
    let (stdout, _, ok) = qslab(&["compare", "--k", "5,7"]);
    assert!(ok);
    assert!(stdout.contains("not representable"));
    assert!(stdout.contains("no sampling"));
}

#[test]
fn optimize_prints_table_values() {
    let (stdout, _, ok) = qslab(&["optimize", "--k", "8", "--measure", "comparisons"]);
    assert!(ok);
    assert!(stdout.contains("(3,1,2)"));
    assert!(stdout.contains("1.62274"));
}

#[test]
fn sort_json_report() {
    let (stdout, _, ok) = qslab(&[
        "sort", "--algo", "yqs", "--n", "64", "--t", "0,1,2", "--w", "7", "--seed", "5", "--json",
    ]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    for key in [
        "n",
        "trials",
        "comparisons",
        "swaps",
        "writes",
        "scanned",
        "bytecode",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let c = &v["comparisons"];
    let parts = &c["by_phase"];
    let sum = parts["partition"].as_f64().unwrap()
        + parts["insertionsort"].as_f64().unwrap()
        + parts["samplesort"].as_f64().unwrap();
    assert_eq!(sum, c["mean"].as_f64().unwrap());
}
