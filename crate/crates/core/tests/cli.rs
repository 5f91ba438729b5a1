use std::process::{Command, Output};

use clean_group_rings::cli::CSV_HEADER;
use serde_json::Value;

fn cleanring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cleanring")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn decide_output_is_byte_stable() {
    let args = ["decide", "--field", "quad:33", "--prime", "2", "--exponent", "33"];
    let a = cleanring(&args);
    let b = cleanring(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["matched_clause"], "T1.3-3d");
    assert_eq!(v["star_clean"], "true");
    assert_eq!(v["derived"]["q1"], 3);
    assert_eq!(v["derived"]["q2"], 11);
}

#[test]
fn decide_out_of_scope_and_trivial_group() {
    let v: Value =
        serde_json::from_slice(&cleanring(&["decide", "--field", "cyclo:5", "--prime", "5", "--exponent", "10"]).stdout)
            .unwrap();
    assert_eq!(v["star_clean"], "out_of_scope");
    let o = cleanring(&["decide", "--field", "cyclo:1", "--prime", "2", "--exponent", "1"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["clean"].clone(), v["star_clean"].clone()), (Value::Bool(true), Value::from("false")));
    assert_eq!(v["group"], serde_json::json!([]));
}

#[test]
fn bad_input_exits_two_without_panicking() {
    for args in [
        &["decide", "--field", "quad:8", "--prime", "3", "--exponent", "3"][..],
        &["decide", "--field", "quad:0", "--prime", "3", "--exponent", "3"],
        &["decide", "--field", "cube:3", "--prime", "3", "--exponent", "3"],
        &["decide", "--field", "cyclo:0", "--prime", "3", "--exponent", "3"],
        &["decide", "--field", "cyclo:7", "--prime", "1", "--exponent", "3"],
        &["decide", "--field", "cyclo:7", "--prime", "3", "--exponent", "0"],
        &["decide", "--field", "cyclo:7", "--prime", "3", "--group", "3,4", "--exponent", "12"],
        &["factor-degrees", "--n", "9", "--p", "3"],
        &["factor-degrees", "--n", "9", "--p", "4"],
        &["sweep", "--family", "quad", "--field-max", "3", "--p-max", "5", "--e-max", "3", "--out", "/nonexistent/dir/x.csv"],
        &[],
    ] {
        let o = cleanring(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
        assert!(!String::from_utf8_lossy(&o.stderr).contains("panicked"), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cleanring(&["--help"]).status.code(), Some(0));
    assert_eq!(cleanring(&["--version"]).status.code(), Some(0));
}

#[test]
fn sweep_rows_are_reproduced_by_decide() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("quad.csv");
    let o = cleanring(&[
        "sweep", "--family", "quad", "--field-max", "5", "--p-max", "20", "--e-max", "8", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7 * 8 * 8); // d in {-5,-3,-2,-1,2,3,5}
    for row in rows.iter().step_by(13) {
        let field = format!("{}:{}", row[0], row[1]);
        let v: Value = serde_json::from_slice(
            &cleanring(&["decide", "--field", &field, "--prime", row[2], "--exponent", row[4]]).stdout,
        )
        .unwrap();
        assert_eq!(v["residue_degree"].to_string(), row[3]);
        assert_eq!(v["clean"].to_string(), row[5]);
        assert_eq!(v["star_clean"], row[6]);
        assert_eq!(v["matched_clause"], row[7]);
    }
    // the quadratic examples in range
    for (d, p, e, clean, star) in [("-2", "3", "8", "true", "false"), ("5", "19", "5", "true", "true")] {
        if p.parse::<u64>().unwrap() <= 20 {
            assert!(rows.iter().any(|r| r[0] == "quad" && r[1] == d && r[2] == p && r[4] == e && r[5] == clean && r[6] == star));
        }
    }
}

#[test]
fn rational_sweep_marks_c3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.json");
    let o = cleanring(&[
        "sweep", "--family", "cyclo", "--field-max", "1", "--p-max", "20", "--e-max", "3", "--out",
        path.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let clean_primes: Vec<u64> = rows
        .iter()
        .filter(|r| r["group_exponent"] == 3 && r["clean"] == true)
        .map(|r| r["prime"].as_u64().unwrap())
        .collect();
    assert_eq!(clean_primes, vec![2, 3, 5, 11, 17]);
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = cleanring(&[
        "verify", "--family", "quad", "--field-max", "10", "--p-max", "20", "--e-max", "20", "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("quad-n1-inert"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let total = report["total"].as_u64().unwrap();
    let agreements = report["agreements"].as_u64().unwrap();
    assert_eq!(total, agreements + report["divergences"].as_array().unwrap().len() as u64);
    assert_eq!(report["allowlist"][0]["id"], "quad-n1-inert");
}

#[test]
fn factor_degrees_table_and_json() {
    let o = cleanring(&["factor-degrees", "--n", "7", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("{1:1, 3:2}"));
    let o = cleanring(&["factor-degrees", "--n", "21", "--p", "2", "--f", "2", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["divisors"].as_array().unwrap().len(), 4);
}
