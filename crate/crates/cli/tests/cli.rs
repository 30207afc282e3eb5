use std::collections::BTreeSet;
use std::fs;
use std::process::{Command, Output};

use fermat_k3::mathieu::GolayCode;
use fermat_k3_cli::{registered_checks, Context};
use serde_json::Value;

fn fermat_k3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermat-k3")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn schema() -> jsonschema::Validator {
    let text = include_str!("../schema/report.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

#[test]
fn registry_is_complete_and_cited() {
    let checks = registered_checks();
    assert!(checks.len() >= 25);
    let ids: BTreeSet<&str> = checks.iter().map(|c| c.id).collect();
    assert_eq!(ids.len(), checks.len());
    assert!(checks.iter().all(|c| !c.citation.trim().is_empty() && !c.group.trim().is_empty()));
    for id in ["prop-2.6-order-structure", "lemma-6.7-snf", "prop-5.1-order-6", "lemma-6.11-h-squared"] {
        assert!(ids.contains(id), "{id}");
    }
}

#[test]
fn list_prints_every_check() {
    let out = fermat_k3(&["list", "--format", "json"]);
    assert!(out.status.success());
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), registered_checks().len());
    assert!(rows.iter().all(|r| r["citation"].as_str().is_some_and(|c| !c.is_empty())));
    let md = String::from_utf8(fermat_k3(&["list"]).stdout).unwrap();
    assert!(md.contains("`lemma-6.7-snf`"));
}

#[test]
fn unknown_id_is_a_usage_error() {
    let out = fermat_k3(&["verify", "--check", "foo"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("foo"));
    assert_eq!(fermat_k3(&["verify"]).status.code(), Some(2));
    assert_eq!(fermat_k3(&["verify", "--all", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(fermat_k3(&["verify", "--all", "--exclude", "bar"]).status.code(), Some(2));
}

#[test]
fn single_check_reports_invariant_factors() {
    let out = fermat_k3(&["verify", "--check", "lemma-6.7-snf"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(schema().is_valid(&report));
    let entries = report.as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["id"], "lemma-6.7-snf");
    assert_eq!(entries[0]["status"], "pass");
    assert_eq!(entries[0]["elapsed_ms"], Value::Null);
    assert_eq!(entries[0]["detail"]["data"]["invariant_factors"], serde_json::json!([1, 1, 4, 8, 8]));
}

#[test]
fn selection_follows_registry_order_and_exclusions_are_skipped() {
    let out = fermat_k3(&[
        "verify",
        "--check",
        "lemma-6.11-h-squared",
        "prop-5.1-order-6",
        "--check",
        "prop-5.1-order-9",
        "--exclude",
        "prop-5.1-order-9",
        "--timings",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(schema().is_valid(&report));
    let ids: Vec<&str> = report.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["prop-5.1-order-9", "prop-5.1-order-6", "lemma-6.11-h-squared"]);
    assert_eq!(report[0]["status"], "skipped");
    assert!(report[1]["elapsed_ms"].is_u64());
}

#[test]
fn markdown_groups_by_section() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.md");
    let out = fermat_k3(&[
        "verify",
        "--check",
        "sec-2-golay-spectrum",
        "prop-5.1-order-12",
        "--format",
        "markdown",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let md = fs::read_to_string(&path).unwrap();
    assert!(md.starts_with("# Verification report"));
    assert!(md.contains("2 checks: 2 pass, 0 fail, 0 error, 0 skipped."));
    assert_eq!(md.matches("\n## ").count(), 2);
    assert!(md.contains("| `prop-5.1-order-12` | pass |"));
}

#[test]
fn cache_round_trip_and_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["verify", "--check", "sec-2-m23-order", "lemma-6.6-orbit-type", "--cache", cache.to_str().unwrap()];
    let first = fermat_k3(&args);
    assert_eq!(first.status.code(), Some(0));
    let files: BTreeSet<String> = fs::read_dir(&cache).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(files, ["golay.hex", "m23.bsgs", "m24.bsgs", "sylow2-m23-seed-0.bsgs"].map(String::from).into());
    let code = GolayCode::from_hex_lines(&fs::read_to_string(cache.join("golay.hex")).unwrap()).unwrap();
    assert_eq!(code, GolayCode::construct());

    let second = fermat_k3(&args);
    assert_eq!(second.stdout, first.stdout);
    assert!(second.stderr.is_empty(), "{}", String::from_utf8_lossy(&second.stderr));

    fs::write(cache.join("m24.bsgs"), "bsgs v1\ngarbage\n").unwrap();
    let repaired = fermat_k3(&args);
    assert_eq!(repaired.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&repaired.stderr).contains("m24.bsgs"));
    assert!(fs::read_to_string(cache.join("m24.bsgs")).unwrap().starts_with("bsgs v1"));
    let third = fermat_k3(&args);
    assert!(third.stderr.is_empty());
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = schema();
    let ok = serde_json::json!([{ "id": "a", "status": "pass", "citation": "c", "elapsed_ms": null, "detail": { "summary": "", "data": null } }]);
    assert!(validator.is_valid(&ok));
    let silent_failure = serde_json::json!([{ "id": "a", "status": "fail", "citation": "c", "elapsed_ms": null, "detail": { "summary": "", "data": null } }]);
    assert!(!validator.is_valid(&silent_failure));
    let bad_status = serde_json::json!([{ "id": "a", "status": "ok", "citation": "c", "elapsed_ms": 3, "detail": { "summary": "x", "data": 1 } }]);
    assert!(!validator.is_valid(&bad_status));
}

#[test]
fn failing_and_broken_checks_carry_a_trace() {
    use fermat_k3_cli::checks::Outcome;
    use fermat_k3_cli::registry::Check;
    use fermat_k3_cli::report::{exit_status, run_check};

    let ctx = Context::new(0, None);
    let template = registered_checks()[0];
    let failing = Check { run: |_| Ok(Outcome { passed: false, summary: String::new(), data: Value::Null }), ..template };
    let erroring = Check { run: |_| anyhow::bail!("boom"), ..template };
    let panicking = Check { run: |_| panic!("kaboom"), ..template };
    let results: Vec<_> = [failing, erroring, panicking].iter().map(|c| run_check(c, &ctx, false)).collect();
    let statuses: Vec<&str> = results.iter().map(|r| r.status.as_str()).collect();
    assert_eq!(statuses, ["fail", "error", "error"]);
    assert!(results.iter().all(|r| !r.detail.summary.is_empty()));
    assert!(results[2].detail.summary.contains("kaboom"));
    assert_eq!(exit_status(&results), 1);
    assert!(schema().is_valid(&serde_json::to_value(&results).unwrap()));
}
