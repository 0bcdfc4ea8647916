//! Suite reports: JSON for machines, Markdown for people.

use crate::report::{CheckOutcome, Mode};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write;

pub const SCHEMA_VERSION: &str = "wittkit.report/1";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Normalized presentation text.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    pub seed: u64,
    pub guard: u64,
}

/// One instance of a suite, e.g. one (p, d, r).
#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub id: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
}

impl Section {
    pub fn new(id: impl Into<String>) -> Self {
        Section { id: id.into(), passed: true, checks: Vec::new(), data: BTreeMap::new() }
    }
    pub fn check(&mut self, c: CheckOutcome) {
        self.passed &= c.passed;
        self.checks.push(c);
    }
    pub fn extend(&mut self, cs: impl IntoIterator<Item = CheckOutcome>) {
        for c in cs {
            self.check(c);
        }
    }
    pub fn datum(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub id: String,
    pub statement: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub suite: String,
    pub params: Params,
    pub passed: bool,
    pub sections: Vec<Section>,
    /// Sampled checks and guard-related remarks.
    pub notices: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub exclusions: Vec<Exclusion>,
    /// Wall-clock milliseconds per section; absent unless requested, since it breaks byte-identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    pub fn new(suite: &str, params: Params, sections: Vec<Section>) -> Self {
        let mut r = Report {
            schema_version: SCHEMA_VERSION.into(),
            suite: suite.into(),
            params,
            passed: true,
            sections,
            notices: Vec::new(),
            exclusions: Vec::new(),
            timings_ms: None,
        };
        r.refresh();
        r
    }

    /// Recomputes the verdict and the sampled-check notices.
    pub fn refresh(&mut self) {
        self.passed = self.sections.iter().all(|s| s.passed);
        self.notices.retain(|n| !n.starts_with("sampled: "));
        for s in &self.sections {
            for c in s.checks.iter().filter(|c| c.mode == Mode::Sampled) {
                self.notices.push(format!("sampled: {}/{} is not exhaustive (seed {}, guard {})", s.id, c.id, self.params.seed, self.params.guard));
            }
        }
    }

    pub fn check_count(&self) -> (usize, usize) {
        let all = self.sections.iter().map(|s| s.checks.len()).sum();
        let ok = self.sections.iter().flat_map(|s| &s.checks).filter(|c| c.passed).count();
        (ok, all)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let (ok, all) = self.check_count();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "# wittkit report: {}\n", self.suite);
        let _ = writeln!(s, "- schema: `{}`", self.schema_version);
        let _ = writeln!(s, "- verdict: **{verdict}** ({ok}/{all} checks)");
        let p = &self.params;
        let mut ps: Vec<String> = Vec::new();
        for (k, v) in [("p", p.p.map(|x| x as usize)), ("n", p.n), ("d", p.d), ("r", p.r)] {
            if let Some(v) = v {
                ps.push(format!("{k}={v}"));
            }
        }
        if let Some(a) = &p.algebra {
            ps.push(format!("algebra=`{a}`"));
        }
        ps.push(format!("seed={}", p.seed));
        ps.push(format!("guard={}", p.guard));
        let _ = writeln!(s, "- parameters: {}", ps.join(", "));
        for e in &self.exclusions {
            let _ = writeln!(s, "\n> **Excluded ({})**: {}", e.id, e.statement);
        }
        if !self.notices.is_empty() {
            let _ = writeln!(s, "\n## Notices\n");
            for n in &self.notices {
                let _ = writeln!(s, "- {n}");
            }
        }
        for sec in &self.sections {
            let _ = writeln!(s, "\n## {} ({})\n", sec.id, if sec.passed { "pass" } else { "FAIL" });
            for (k, v) in &sec.data {
                let _ = writeln!(s, "- {k}: `{v}`");
            }
            if !sec.data.is_empty() {
                s.push('\n');
            }
            let _ = writeln!(s, "| check | status | mode | details |");
            let _ = writeln!(s, "|---|---|---|---|");
            for c in &sec.checks {
                let mode = serde_json::to_value(c.mode).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                let mut details = c.details.replace('|', "\\|").replace('\n', " ");
                if !c.witnesses.is_empty() {
                    details.push_str(&format!(" (witness: {})", c.witnesses.join("; ").replace('|', "\\|")));
                }
                let _ = writeln!(s, "| {} | {} | {} | {} |", c.id, if c.passed { "pass" } else { "FAIL" }, mode, details);
            }
        }
        if let Some(t) = &self.timings_ms {
            let _ = writeln!(s, "\n## Timings (ms)\n");
            for (k, v) in t {
                let _ = writeln!(s, "- {k}: {v}");
            }
        }
        s
    }
}
