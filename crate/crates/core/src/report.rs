//! Check outcomes shared by the library suites and the CLI reports.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
    Symbolic,
    /// Found by a linear solve, then verified on every pair.
    Solver,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub passed: bool,
    pub mode: Mode,
    pub details: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl CheckOutcome {
    pub fn new(id: impl Into<String>, passed: bool, mode: Mode, details: impl Into<String>) -> Self {
        CheckOutcome { id: id.into(), passed, mode, details: details.into(), witnesses: vec![] }
    }
    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }
}
