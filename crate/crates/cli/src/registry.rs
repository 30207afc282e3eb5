//! The check registry: ids, groups and citations come from `data/checks.tsv`,
//! implementations from [`crate::checks`].

use std::sync::OnceLock;

use crate::checks::{self, CheckFn};

const TABLE: &str = include_str!("../data/checks.tsv");

#[derive(Clone, Copy)]
pub struct Check {
    /// Internal name, used to find the implementation.
    pub key: &'static str,
    /// Public id accepted by `--check`.
    pub id: &'static str,
    /// Heading under which the markdown report lists the check.
    pub group: &'static str,
    pub citation: &'static str,
    pub run: CheckFn,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check").field("id", &self.id).field("group", &self.group).finish()
    }
}

/// All checks in registry order.
///
/// Panics if the table and the implementations disagree; the unit tests
/// below catch that at build time.
pub fn checks() -> &'static [Check] {
    static REGISTRY: OnceLock<Vec<Check>> = OnceLock::new();
    REGISTRY.get_or_init(|| build().unwrap_or_else(|e| panic!("check table: {e}")))
}

pub fn find(id: &str) -> Option<&'static Check> {
    checks().iter().find(|c| c.id == id)
}

fn build() -> Result<Vec<Check>, String> {
    let mut out: Vec<Check> = Vec::new();
    for (n, line) in TABLE.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&'static str> = line.split('\t').collect();
        let [key, id, group, citation] = fields[..] else {
            return Err(format!("line {}: expected 4 tab-separated fields", n + 1));
        };
        if [key, id, group, citation].iter().any(|f| f.trim().is_empty()) {
            return Err(format!("line {}: empty field", n + 1));
        }
        let run = checks::lookup(key).ok_or_else(|| format!("line {}: no implementation for '{key}'", n + 1))?;
        if out.iter().any(|c| c.id == id || c.key == key) {
            return Err(format!("line {}: duplicate '{id}'", n + 1));
        }
        out.push(Check { key, id, group, citation, run });
    }
    if let Some(key) = checks::keys().find(|k| !out.iter().any(|c| c.key == *k)) {
        return Err(format!("implementation '{key}' has no table entry"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_implementations() {
        let all = build().unwrap();
        assert_eq!(all.len(), checks::keys().count());
        assert!(all.iter().all(|c| c.id.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'.')));
    }
}
