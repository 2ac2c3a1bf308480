//! End-to-end coverage of the `pgst` binary: envelope shape, byte-stable
//! goldens, exit codes, file artifacts, and cross-command consistency.

use std::path::PathBuf;
use std::process::Command;

use pgst_core::certificates::{check_certificate, ObstructionCertificate};
use serde_json::Value;

fn pgst(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_pgst"))
        .args(args)
        .output()
        .expect("binary spawns");
    (
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        out.status.code().expect("no signal"),
    )
}

fn pgst_json(args: &[&str]) -> (Value, i32) {
    let (stdout, code) = pgst(args);
    let value = serde_json::from_str(stdout.trim_end()).expect("stdout is one JSON envelope");
    (value, code)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pgst-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn classify_goldens_are_byte_exact() {
    let cases = [
        (
            vec!["classify", "7", "2", "6"],
            r#"{"command":"classify","inputs":{"a":2,"b":6,"n":7},"result":{"r":1,"reason":"POWER_OF_TWO_CASE","t":3,"verdict":"PGST"},"schema_version":"1","status":"ok"}"#,
        ),
        (
            vec!["classify", "11", "3", "9"],
            r#"{"command":"classify","inputs":{"a":3,"b":9,"n":11},"result":{"p":3,"r":3,"reason":"BAD_DYADIC_ALIGNMENT","t":2,"verdict":"NO_PGST"},"schema_version":"1","status":"ok"}"#,
        ),
        (
            vec!["classify", "5", "1", "4"],
            r#"{"command":"classify","inputs":{"a":1,"b":4,"n":5},"result":{"p":3,"r":3,"reason":"NOT_MIRROR_PAIR","t":1,"verdict":"NO_PGST"},"schema_version":"1","status":"ok"}"#,
        ),
        (
            vec!["classify", "8", "4", "5"],
            r#"{"command":"classify","inputs":{"a":4,"b":5,"n":8},"result":{"r":9,"reason":"ODD_PART_COMPOSITE","t":0,"verdict":"NO_PGST"},"schema_version":"1","status":"ok"}"#,
        ),
    ];
    for (args, expected) in cases {
        let (stdout, code) = pgst(&args);
        assert_eq!(code, 0);
        assert_eq!(stdout, format!("{expected}\n"), "args: {args:?}");
    }
}

#[test]
fn certificate_golden_and_verification() {
    let (stdout, code) = pgst(&["certificate", "11", "3"]);
    assert_eq!(code, 0);
    let expected = concat!(
        r#"{"command":"certificate","inputs":{"a":3,"n":11,"verify":false},"result":{"a":3,"b":9,"#,
        r#""case":"DYADIC_RESIDUE_BLOCK","document":"n = 11\na = 3\ncase = DYADIC_RESIDUE_BLOCK\n"#,
        r#"odd 1 1\nodd 5 -1\nodd 9 1\neven 2 1\neven 6 -1\neven 10 1\n","even_class":[[2,1],[6,-1],[10,1]],"#,
        r#""n":11,"odd_class":[[1,1],[5,-1],[9,1]]},"schema_version":"1","status":"ok"}"#,
        "\n"
    );
    assert_eq!(stdout, expected);

    let (value, code) = pgst_json(&["certificate", "8", "1", "--verify"]);
    assert_eq!(code, 0);
    let verification = &value["result"]["verification"];
    assert_eq!(verification["passed"], Value::Bool(true));
    assert_eq!(value["result"]["case"], "ODD_REFLECTION_BLOCK");
}

#[test]
fn certificate_not_applicable_exits_4() {
    let (value, code) = pgst_json(&["certificate", "7", "1"]);
    assert_eq!(code, 4);
    assert_eq!(value["status"], "error");
    assert_eq!(value["error"]["code"], "CERT_NOT_APPLICABLE");

    // Degenerate center pair and non-negative pairs are equally inadmissible.
    let (_, code) = pgst_json(&["certificate", "3", "2"]);
    assert_eq!(code, 4);
}

#[test]
fn certificate_document_round_trips_through_checker() {
    let (value, _) = pgst_json(&["certificate", "17", "1", "--verify"]);
    let document = value["result"]["document"].as_str().unwrap();
    let parsed = ObstructionCertificate::parse_document(document).unwrap();
    let report = check_certificate(&parsed).unwrap();
    assert!(report.all_passed());
    let emitted = &value["result"]["verification"];
    assert_eq!(emitted["passed"], Value::Bool(report.all_passed()));
    let residual: f64 = emitted["odd_class_residual"].as_f64().unwrap();
    assert_eq!(residual, report.odd_class_residual);
}

#[test]
fn search_reports_swap_time() {
    let (value, code) = pgst_json(&["search", "2", "1", "2", "--eps", "1e-6", "--tmax", "10"]);
    assert_eq!(code, 0);
    let result = &value["result"];
    assert_eq!(result["achieved"], Value::Bool(true));
    let best_time = result["best_time"].as_f64().unwrap();
    assert!((best_time - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    assert!(result["best_fidelity"].as_f64().unwrap() > 1.0 - 1e-6);
    assert!(result["samples_evaluated"].as_u64().unwrap() > 0);
}

#[test]
fn search_separates_positive_from_negative_instances() {
    let (value, code) = pgst_json(&["search", "4", "1", "4", "--eps", "0.01", "--tmax", "10000"]);
    assert_eq!(code, 0);
    assert_eq!(value["result"]["achieved"], Value::Bool(true));

    let (value, code) = pgst_json(&["search", "8", "1", "8", "--eps", "0.01", "--tmax", "10000"]);
    assert_eq!(code, 0);
    assert_eq!(value["result"]["achieved"], Value::Bool(false));
    assert!(value["result"]["best_fidelity"].as_f64().unwrap() < 0.99);
}

#[test]
fn search_budget_exceeded_exits_5_with_partial_summary() {
    let (value, code) = pgst_json(&[
        "search", "2", "1", "2", "--eps", "0.01", "--tmax", "50", "--eval-cap", "100",
    ]);
    assert_eq!(code, 5);
    assert_eq!(value["error"]["code"], "BUDGET_EXCEEDED");
    assert_eq!(value["result"]["samples_evaluated"].as_u64().unwrap(), 200);
    assert!(value["result"]["best_fidelity"].as_f64().unwrap() > 0.0);
}

#[test]
fn search_writes_trace_csv() {
    let path = scratch("trace.csv");
    let path_str = path.to_str().unwrap();
    let (value, code) = pgst_json(&[
        "search", "3", "1", "3", "--eps", "0.5", "--tmax", "20", "--trace", path_str,
    ]);
    assert_eq!(code, 0);
    let rows = value["result"]["trace_rows"].as_u64().unwrap();
    let body = std::fs::read_to_string(&path).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("t,fidelity"));
    assert_eq!(lines.count() as u64, rows);

    // Re-running the identical invocation reproduces the file byte for byte.
    let (_, code) = pgst_json(&[
        "search", "3", "1", "3", "--eps", "0.5", "--tmax", "20", "--trace", path_str,
    ]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), body);
}

#[test]
fn sweep_inline_golden() {
    let (stdout, code) = pgst(&["sweep", "--nmax", "3"]);
    assert_eq!(code, 0);
    let expected = concat!(
        r#"{"command":"sweep","inputs":{"nmax":3},"result":{"nmax":3,"rows":["#,
        r#"{"a":1,"b":2,"n":2,"p":3,"r":3,"reason":"PRIME_CASE","t":0,"verdict":"PGST"},"#,
        r#"{"a":1,"b":3,"n":3,"r":1,"reason":"POWER_OF_TWO_CASE","t":2,"verdict":"PGST"},"#,
        r#"{"a":2,"b":2,"n":3,"r":1,"reason":"SELF_PAIR","t":2,"verdict":"DEGENERATE"}"#,
        r#"]},"schema_version":"1","status":"ok"}"#,
        "\n"
    );
    assert_eq!(stdout, expected);
}

#[test]
fn sweep_csv_has_expected_rows() {
    let path = scratch("sweep8.csv");
    let path_str = path.to_str().unwrap();
    let (value, code) = pgst_json(&["sweep", "--nmax", "8", "--csv", path_str]);
    assert_eq!(code, 0);

    let body = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines[0], "n,a,b,verdict,reason,t,r,p");

    // Row count is sum over n of ceil(n/2).
    let expected_rows: u64 = (2..=8u64).map(|n| n.div_ceil(2)).sum();
    assert_eq!(lines.len() as u64 - 1, expected_rows);
    assert_eq!(value["result"]["rows_written"].as_u64().unwrap(), expected_rows);

    // Every mirror pair of P_8 is a negative instance.
    for a in 1..=4u64 {
        let row = format!("8,{a},{},NO_PGST,ODD_PART_COMPOSITE,0,9,", 9 - a);
        assert!(lines.contains(&row.as_str()), "missing row: {row}");
    }
}

#[test]
fn sweep_rows_agree_with_classify_calls() {
    let path = scratch("sweep60.csv");
    let path_str = path.to_str().unwrap();
    let (_, code) = pgst_json(&["sweep", "--nmax", "60", "--csv", path_str]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = body.lines().skip(1).collect();

    // Deterministic sample of 200 rows, cross-checked against one-off calls.
    let mut state = 0x5eedu64;
    for _ in 0..200 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let row = rows[(state >> 33) as usize % rows.len()];
        let fields: Vec<&str> = row.split(',').collect();
        let (n, a, b) = (fields[0], fields[1], fields[2]);
        let (value, code) = pgst_json(&["classify", n, a, b]);
        assert_eq!(code, 0);
        let result = &value["result"];
        assert_eq!(result["verdict"].as_str().unwrap(), fields[3], "row {row}");
        assert_eq!(result["reason"].as_str().unwrap(), fields[4], "row {row}");
        assert_eq!(result["t"].as_u64().unwrap().to_string(), fields[5]);
        assert_eq!(result["r"].as_u64().unwrap().to_string(), fields[6]);
        let p = result.get("p").and_then(Value::as_u64).map(|p| p.to_string()).unwrap_or_default();
        assert_eq!(p, fields[7], "row {row}");
    }
}

#[test]
fn spectrum_and_support_goldens() {
    let (stdout, code) = pgst(&["spectrum", "3"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        concat!(
            r#"{"command":"spectrum","inputs":{"n":3},"result":{"eigenvalues":"#,
            r#"[1.4142135623730951e0,0.0000000000000000e0,-1.4142135623730951e0],"n":3},"#,
            r#""schema_version":"1","status":"ok"}"#,
            "\n"
        )
    );

    let (value, code) = pgst_json(&["support", "11", "3"]);
    assert_eq!(code, 0);
    assert_eq!(value["result"]["excluded"], serde_json::json!([4, 8]));
    assert_eq!(value["result"]["included_count"].as_u64().unwrap(), 9);

    let (value, code) = pgst_json(&["spectrum", "100001"]);
    assert_eq!(code, 3);
    assert_eq!(value["error"]["code"], "RANGE_ERROR");
}

#[test]
fn fidelity_at_transfer_time() {
    let (value, code) = pgst_json(&["fidelity", "3", "1", "3", "2.221441469"]);
    assert_eq!(code, 0);
    let fid = value["result"]["fidelity"].as_f64().unwrap();
    assert!((fid - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes_for_bad_invocations() {
    let (value, code) = pgst_json(&["classify", "x", "1", "2"]);
    assert_eq!(code, 2);
    assert_eq!(value["error"]["code"], "PARSE_ERROR");

    let (_, code) = pgst_json(&["classify", "5", "1"]);
    assert_eq!(code, 2);

    let (_, code) = pgst_json(&["frobnicate"]);
    assert_eq!(code, 2);

    let (value, code) = pgst_json(&["classify", "5", "0", "3"]);
    assert_eq!(code, 3);
    assert_eq!(value["error"]["code"], "RANGE_ERROR");

    let (_, code) = pgst_json(&["search", "2", "1", "2", "--eps", "2.0", "--tmax", "5"]);
    assert_eq!(code, 3);

    let (value, code) = pgst_json(&["sweep", "--nmax", "1"]);
    assert_eq!(code, 3);
    assert_eq!(value["status"], "error");

    let (_, code) = pgst_json(&["help"]);
    assert_eq!(code, 0);
}

#[test]
fn io_failure_exits_6() {
    let (value, code) = pgst_json(&[
        "sweep", "--nmax", "4", "--csv", "/nonexistent-dir/never/sweep.csv",
    ]);
    assert_eq!(code, 6);
    assert_eq!(value["error"]["code"], "IO_ERROR");
}

#[test]
fn identical_argv_gives_identical_bytes() {
    for args in [
        vec!["classify", "19", "6", "14"],
        vec!["certificate", "35", "2", "--verify"],
        vec!["search", "4", "1", "4", "--eps", "0.2", "--tmax", "200"],
        vec!["spectrum", "12"],
    ] {
        let (first, c1) = pgst(&args);
        let (second, c2) = pgst(&args);
        assert_eq!(first, second, "non-deterministic output for {args:?}");
        assert_eq!(c1, c2);
    }
}
