//! Running checks and rendering their results.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::context::Context;
use crate::registry::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Detail {
    pub summary: String,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub citation: String,
    /// Wall time, only recorded on request so that reports stay reproducible.
    pub elapsed_ms: Option<u64>,
    pub detail: Detail,
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic with a non-string payload".into())
}

pub fn run_check(check: &Check, ctx: &Context, timings: bool) -> CheckResult {
    let start = Instant::now();
    let (status, summary, data) = match panic::catch_unwind(AssertUnwindSafe(|| (check.run)(ctx))) {
        Ok(Ok(o)) if o.passed => (Status::Pass, o.summary, o.data),
        Ok(Ok(o)) => {
            let summary = if o.summary.trim().is_empty() { "check failed without a summary".into() } else { o.summary };
            (Status::Fail, summary, o.data)
        }
        Ok(Err(e)) => (Status::Error, format!("{e:#}"), Value::Null),
        Err(payload) => (Status::Error, format!("panicked: {}", panic_message(payload.as_ref())), Value::Null),
    };
    CheckResult {
        id: check.id.to_string(),
        status,
        citation: check.citation.to_string(),
        elapsed_ms: timings.then(|| start.elapsed().as_millis() as u64),
        detail: Detail { summary, data },
    }
}

pub fn skipped(check: &Check) -> CheckResult {
    CheckResult {
        id: check.id.to_string(),
        status: Status::Skipped,
        citation: check.citation.to_string(),
        elapsed_ms: None,
        detail: Detail { summary: "excluded from this run".into(), data: Value::Null },
    }
}

/// Runs `selected` concurrently; results come back in the given order.
/// Checks listed in `excluded` are reported as skipped.
pub fn run_checks(selected: &[&Check], excluded: &[&str], ctx: &Context, timings: bool) -> Vec<CheckResult> {
    selected
        .par_iter()
        .map(|c| if excluded.contains(&c.id) { skipped(c) } else { run_check(c, ctx, timings) })
        .collect()
}

/// 0 when nothing failed or errored, 1 otherwise.
pub fn exit_status(results: &[CheckResult]) -> u8 {
    u8::from(results.iter().any(|r| matches!(r.status, Status::Fail | Status::Error)))
}

pub fn to_json(results: &[CheckResult]) -> String {
    let mut out = serde_json::to_string_pretty(results).expect("results serialize");
    out.push('\n');
    out
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|").replace('\n', " ")
}

pub fn to_markdown(results: &[CheckResult], checks: &[Check]) -> String {
    let count = |s: Status| results.iter().filter(|r| r.status == s).count();
    let mut out = String::from("# Verification report\n\n");
    out.push_str(&format!(
        "{} checks: {} pass, {} fail, {} error, {} skipped.\n",
        results.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Error),
        count(Status::Skipped)
    ));
    let group_of = |id: &str| checks.iter().find(|c| c.id == id).map_or("Other", |c| c.group);
    let mut groups: Vec<&str> = Vec::new();
    for r in results {
        let g = group_of(&r.id);
        if !groups.contains(&g) {
            groups.push(g);
        }
    }
    for g in groups {
        out.push_str(&format!("\n## {g}\n\n| Check | Status | Citation | Summary |\n|---|---|---|---|\n"));
        for r in results.iter().filter(|r| group_of(&r.id) == g) {
            let status = match r.elapsed_ms {
                Some(ms) => format!("{} ({ms} ms)", r.status.as_str()),
                None => r.status.as_str().to_string(),
            };
            out.push_str(&format!("| `{}` | {status} | {} | {} |\n", r.id, cell(&r.citation), cell(&r.detail.summary)));
        }
    }
    out
}
