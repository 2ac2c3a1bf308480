//! `pgst` - classify, certify, and numerically probe state transfer on
//! path graphs from the command line.
//!
//! Output contract: exactly one JSON envelope on stdout per invocation,
//! bulk data (fidelity traces, sweep tables) as CSV files. Exit codes:
//! 0 ok, 2 parse failure, 3 range violation, 4 certificate not applicable,
//! 5 search budget exceeded, 6 I/O failure.

mod envelope;

use std::fmt::Write as _;

use pgst_core::certificates::{
    check_certificate, generate_certificate, CertificateError, CertificateReport,
    ObstructionCertificate,
};
use pgst_core::classifier::{classify, Classification};
use pgst_core::dynamics::{
    search_best_time_with, DynamicsError, FidelityTrace, PairDynamics, SearchConfig,
};
use pgst_core::spectra::{spectrum, support};
use serde_json::{json, Value};

use envelope::{exit, render, CliError};

const USAGE: &str = "\
pgst - pretty good state transfer on paths

USAGE:
  pgst classify <n> <a> <b>
  pgst certificate <n> <a> [--verify]
  pgst search <n> <a> <b> --eps <epsilon> --tmax <T> [--trace <path>] [--eval-cap <N>]
  pgst sweep --nmax <N> [--csv <path>]
  pgst spectrum <n>
  pgst support <n> <a>
  pgst fidelity <n> <a> <b> <t>
  pgst help

Every command prints one JSON envelope on stdout. Exit codes: 0 ok,
2 parse, 3 range, 4 certificate-not-applicable, 5 budget, 6 io.
";

/// Eigenvalue listings are capped; beyond this ask for `support` or use the
/// library directly.
const SPECTRUM_MAX_N: u64 = 100_000;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (out, code) = dispatch(&args);
    println!("{out}");
    std::process::exit(code);
}

fn dispatch(args: &[String]) -> (String, i32) {
    let Some(command) = args.first() else {
        eprint!("{USAGE}");
        return render(
            "",
            json!({ "argv": [] }),
            Err(CliError::parse("missing command")),
        );
    };
    let rest = &args[1..];
    match command.as_str() {
        "classify" => cmd_classify(rest),
        "certificate" => cmd_certificate(rest),
        "search" => cmd_search(rest),
        "sweep" => cmd_sweep(rest),
        "spectrum" => cmd_spectrum(rest),
        "support" => cmd_support(rest),
        "fidelity" => cmd_fidelity(rest),
        "help" | "--help" | "-h" => render("help", json!({}), Ok(json!({ "usage": USAGE }))),
        other => {
            eprint!("{USAGE}");
            render(
                other,
                json!({ "argv": rest }),
                Err(CliError::parse(format!("unknown command '{other}'"))),
            )
        }
    }
}

// ---------------------------------------------------------------------------
// argument parsing

fn argv_echo(args: &[String]) -> Value {
    json!({ "argv": args })
}

fn parse_u64(args: &[String], idx: usize, name: &str) -> Result<u64, CliError> {
    let raw = args
        .get(idx)
        .ok_or_else(|| CliError::parse(format!("missing argument <{name}>")))?;
    raw.parse()
        .map_err(|_| CliError::parse(format!("expected nonnegative integer for <{name}>, got '{raw}'")))
}

fn parse_f64(raw: &str, name: &str) -> Result<f64, CliError> {
    raw.parse()
        .map_err(|_| CliError::parse(format!("expected number for <{name}>, got '{raw}'")))
}

fn expect_len(args: &[String], len: usize) -> Result<(), CliError> {
    if args.len() > len {
        Err(CliError::parse(format!("unexpected argument '{}'", args[len])))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// error mapping

fn range_from<E: std::fmt::Display>(e: E) -> CliError {
    CliError::range(e.to_string())
}

fn map_certificate(e: CertificateError) -> CliError {
    match e {
        CertificateError::NotApplicable { .. } => {
            CliError::new("CERT_NOT_APPLICABLE", exit::NOT_APPLICABLE, e.to_string())
        }
        CertificateError::Factorization(_) => {
            CliError::new("FACTORIZATION_INCOMPLETE", exit::RANGE, e.to_string())
        }
        other => CliError::range(other.to_string()),
    }
}

fn map_dynamics(e: DynamicsError) -> CliError {
    match e {
        DynamicsError::BudgetExceeded { ref partial } => {
            let summary = search_summary(partial);
            let mut err = CliError::new("BUDGET_EXCEEDED", exit::BUDGET, e.to_string());
            err.partial = Some(summary);
            err
        }
        DynamicsError::ClampViolation { .. } => {
            CliError::new("CLAMP_VIOLATION", exit::INTERNAL, e.to_string())
        }
        other => CliError::range(other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// commands

fn classification_value(c: &Classification) -> Value {
    let mut v = json!({
        "verdict": c.verdict.as_str(),
        "reason": c.reason.as_str(),
        "t": c.params.t,
        "r": c.params.r,
    });
    if let Some(p) = c.params.p {
        v["p"] = json!(p);
    }
    v
}

fn cmd_classify(args: &[String]) -> (String, i32) {
    let parsed = (|| {
        let n = parse_u64(args, 0, "n")?;
        let a = parse_u64(args, 1, "a")?;
        let b = parse_u64(args, 2, "b")?;
        expect_len(args, 3)?;
        Ok((n, a, b))
    })();
    let (n, a, b) = match parsed {
        Ok(t) => t,
        Err(e) => return render("classify", argv_echo(args), Err(e)),
    };
    let inputs = json!({ "n": n, "a": a, "b": b });
    let outcome = classify(n, a, b)
        .map(|c| classification_value(&c))
        .map_err(range_from);
    render("classify", inputs, outcome)
}

fn certificate_value(cert: &ObstructionCertificate) -> Value {
    let class_pairs = |class: &std::collections::BTreeMap<u64, i64>| -> Value {
        Value::Array(class.iter().map(|(&j, &l)| json!([j, l])).collect())
    };
    json!({
        "n": cert.n,
        "a": cert.a,
        "b": cert.n + 1 - cert.a,
        "case": cert.case_tag.as_str(),
        "odd_class": class_pairs(&cert.odd_class),
        "even_class": class_pairs(&cert.even_class),
        "document": cert.to_document(),
    })
}

fn report_value(report: &CertificateReport) -> Value {
    json!({
        "parity_ok": report.parity_ok,
        "support_ok": report.support_ok,
        "coefficient_sums_odd": report.coefficient_sums_odd,
        "zero_sum_ok": report.zero_sum_ok,
        "odd_class_residual": report.odd_class_residual,
        "even_class_residual": report.even_class_residual,
        "odd_class_bound": report.odd_class_bound,
        "even_class_bound": report.even_class_bound,
        "passed": report.all_passed(),
    })
}

fn cmd_certificate(args: &[String]) -> (String, i32) {
    let parsed = (|| {
        let n = parse_u64(args, 0, "n")?;
        let a = parse_u64(args, 1, "a")?;
        let mut verify = false;
        for arg in &args[2.min(args.len())..] {
            match arg.as_str() {
                "--verify" => verify = true,
                other => return Err(CliError::parse(format!("unexpected argument '{other}'"))),
            }
        }
        Ok((n, a, verify))
    })();
    let (n, a, verify) = match parsed {
        Ok(t) => t,
        Err(e) => return render("certificate", argv_echo(args), Err(e)),
    };
    let inputs = json!({ "n": n, "a": a, "verify": verify });
    let outcome = (|| {
        let cert = generate_certificate(n, a).map_err(map_certificate)?;
        let mut value = certificate_value(&cert);
        if verify {
            let report = check_certificate(&cert).map_err(map_certificate)?;
            value["verification"] = report_value(&report);
        }
        Ok(value)
    })();
    render("certificate", inputs, outcome)
}

fn search_summary(trace: &FidelityTrace) -> Value {
    json!({
        "achieved": trace.achieved,
        "best_time": trace.best_time,
        "best_fidelity": trace.best_fidelity,
        "samples_evaluated": trace.evaluations,
    })
}

fn write_trace(trace: &FidelityTrace, path: &str) -> Result<(), CliError> {
    std::fs::write(path, trace.to_csv())
        .map_err(|e| CliError::io(format!("writing trace to '{path}': {e}")))
}

fn cmd_search(args: &[String]) -> (String, i32) {
    let parsed = (|| {
        let n = parse_u64(args, 0, "n")?;
        let a = parse_u64(args, 1, "a")?;
        let b = parse_u64(args, 2, "b")?;
        let mut eps = None;
        let mut tmax = None;
        let mut trace_path = None;
        let mut eval_cap = None;
        let mut i = 3;
        while i < args.len() {
            match args[i].as_str() {
                "--eps" => {
                    let raw = args.get(i + 1).ok_or_else(|| CliError::parse("--eps needs a value"))?;
                    eps = Some(parse_f64(raw, "eps")?);
                    i += 2;
                }
                "--tmax" => {
                    let raw = args.get(i + 1).ok_or_else(|| CliError::parse("--tmax needs a value"))?;
                    tmax = Some(parse_f64(raw, "tmax")?);
                    i += 2;
                }
                "--trace" => {
                    let raw = args.get(i + 1).ok_or_else(|| CliError::parse("--trace needs a path"))?;
                    trace_path = Some(raw.clone());
                    i += 2;
                }
                "--eval-cap" => {
                    let raw = args.get(i + 1).ok_or_else(|| CliError::parse("--eval-cap needs a value"))?;
                    eval_cap = Some(
                        raw.parse::<u64>()
                            .map_err(|_| CliError::parse(format!("expected integer for <eval-cap>, got '{raw}'")))?,
                    );
                    i += 2;
                }
                other => return Err(CliError::parse(format!("unexpected argument '{other}'"))),
            }
        }
        let eps = eps.ok_or_else(|| CliError::parse("missing required --eps"))?;
        let tmax = tmax.ok_or_else(|| CliError::parse("missing required --tmax"))?;
        Ok((n, a, b, eps, tmax, trace_path, eval_cap))
    })();
    let (n, a, b, eps, tmax, trace_path, eval_cap) = match parsed {
        Ok(t) => t,
        Err(e) => return render("search", argv_echo(args), Err(e)),
    };
    let mut inputs = json!({ "n": n, "a": a, "b": b, "eps": eps, "tmax": tmax });
    if let Some(path) = &trace_path {
        inputs["trace"] = json!(path);
    }
    let mut config = SearchConfig::new(eps, tmax);
    if let Some(cap) = eval_cap {
        inputs["eval_cap"] = json!(cap);
        config.eval_cap = cap;
    }
    let outcome = (|| match search_best_time_with(n, a, b, &config) {
        Ok(trace) => {
            let mut summary = search_summary(&trace);
            if let Some(path) = &trace_path {
                write_trace(&trace, path)?;
                summary["trace_path"] = json!(path);
                summary["trace_rows"] = json!(trace.samples.len());
            }
            Ok(summary)
        }
        Err(DynamicsError::BudgetExceeded { partial }) => {
            if let Some(path) = &trace_path {
                write_trace(&partial, path)?;
            }
            Err(map_dynamics(DynamicsError::BudgetExceeded { partial }))
        }
        Err(other) => Err(map_dynamics(other)),
    })();
    render("search", inputs, outcome)
}

fn sweep_row(n: u64, a: u64) -> (Classification, u64) {
    let b = n + 1 - a;
    let c = classify(n, a, b).expect("sweep enumerates valid pairs");
    (c, b)
}

fn cmd_sweep(args: &[String]) -> (String, i32) {
    let parsed = (|| {
        let mut nmax = None;
        let mut csv_path = None;
        let mut i = 0;
        while i < args.len() {
            match args[i].as_str() {
                "--nmax" => {
                    let raw = args.get(i + 1).ok_or_else(|| CliError::parse("--nmax needs a value"))?;
                    nmax = Some(
                        raw.parse::<u64>()
                            .map_err(|_| CliError::parse(format!("expected integer for <nmax>, got '{raw}'")))?,
                    );
                    i += 2;
                }
                "--csv" => {
                    let raw = args.get(i + 1).ok_or_else(|| CliError::parse("--csv needs a path"))?;
                    csv_path = Some(raw.clone());
                    i += 2;
                }
                other => return Err(CliError::parse(format!("unexpected argument '{other}'"))),
            }
        }
        let nmax = nmax.ok_or_else(|| CliError::parse("missing required --nmax"))?;
        Ok((nmax, csv_path))
    })();
    let (nmax, csv_path) = match parsed {
        Ok(t) => t,
        Err(e) => return render("sweep", argv_echo(args), Err(e)),
    };
    let mut inputs = json!({ "nmax": nmax });
    if let Some(path) = &csv_path {
        inputs["csv"] = json!(path);
    }
    let outcome = (|| {
        if nmax < 2 {
            return Err(CliError::range(format!("sweep requires nmax >= 2, got {nmax}")));
        }
        if let Some(path) = &csv_path {
            let mut csv = String::from("n,a,b,verdict,reason,t,r,p\n");
            let mut rows = 0u64;
            for n in 2..=nmax {
                for a in 1..=n.div_ceil(2) {
                    let (c, b) = sweep_row(n, a);
                    let p = c.params.p.map(|p| p.to_string()).unwrap_or_default();
                    writeln!(
                        csv,
                        "{n},{a},{b},{},{},{},{},{p}",
                        c.verdict.as_str(),
                        c.reason.as_str(),
                        c.params.t,
                        c.params.r
                    )
                    .expect("string write cannot fail");
                    rows += 1;
                }
            }
            std::fs::write(path, csv)
                .map_err(|e| CliError::io(format!("writing sweep to '{path}': {e}")))?;
            Ok(json!({ "nmax": nmax, "rows_written": rows, "csv_path": path }))
        } else {
            let mut rows = Vec::new();
            for n in 2..=nmax {
                for a in 1..=n.div_ceil(2) {
                    let (c, b) = sweep_row(n, a);
                    let mut row = classification_value(&c);
                    row["n"] = json!(n);
                    row["a"] = json!(a);
                    row["b"] = json!(b);
                    rows.push(row);
                }
            }
            Ok(json!({ "nmax": nmax, "rows": rows }))
        }
    })();
    render("sweep", inputs, outcome)
}

fn cmd_spectrum(args: &[String]) -> (String, i32) {
    let parsed = (|| {
        let n = parse_u64(args, 0, "n")?;
        expect_len(args, 1)?;
        Ok(n)
    })();
    let n = match parsed {
        Ok(t) => t,
        Err(e) => return render("spectrum", argv_echo(args), Err(e)),
    };
    let inputs = json!({ "n": n });
    let outcome = (|| {
        if n > SPECTRUM_MAX_N {
            return Err(CliError::range(format!(
                "eigenvalue listing capped at n <= {SPECTRUM_MAX_N}, got {n}"
            )));
        }
        let spec = spectrum(n).map_err(range_from)?;
        let eigenvalues: Vec<f64> = (1..=n).map(|j| spec.eigenvalue(j)).collect();
        Ok(json!({ "n": n, "eigenvalues": eigenvalues }))
    })();
    render("spectrum", inputs, outcome)
}

fn cmd_support(args: &[String]) -> (String, i32) {
    let parsed = (|| {
        let n = parse_u64(args, 0, "n")?;
        let a = parse_u64(args, 1, "a")?;
        expect_len(args, 2)?;
        Ok((n, a))
    })();
    let (n, a) = match parsed {
        Ok(t) => t,
        Err(e) => return render("support", argv_echo(args), Err(e)),
    };
    let inputs = json!({ "n": n, "a": a });
    let outcome = support(n, a)
        .map(|mask| {
            json!({
                "n": n,
                "a": a,
                "step": mask.step(),
                "excluded": mask.excluded(),
                "included_count": mask.included_len(),
            })
        })
        .map_err(range_from);
    render("support", inputs, outcome)
}

fn cmd_fidelity(args: &[String]) -> (String, i32) {
    let parsed = (|| {
        let n = parse_u64(args, 0, "n")?;
        let a = parse_u64(args, 1, "a")?;
        let b = parse_u64(args, 2, "b")?;
        let t_raw = args
            .get(3)
            .ok_or_else(|| CliError::parse("missing argument <t>"))?;
        let t = parse_f64(t_raw, "t")?;
        expect_len(args, 4)?;
        Ok((n, a, b, t))
    })();
    let (n, a, b, t) = match parsed {
        Ok(v) => v,
        Err(e) => return render("fidelity", argv_echo(args), Err(e)),
    };
    let inputs = json!({ "n": n, "a": a, "b": b, "t": t });
    let outcome = (|| {
        let dynamics = PairDynamics::new(n, a, b).map_err(map_dynamics)?;
        let amp = dynamics.amplitude(t).map_err(map_dynamics)?;
        let fid = dynamics.fidelity(t).map_err(map_dynamics)?;
        Ok(json!({
            "fidelity": fid,
            "amplitude_re": amp.re,
            "amplitude_im": amp.im,
        }))
    })();
    render("fidelity", inputs, outcome)
}
