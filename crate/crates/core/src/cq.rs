//! Competency-question manifests and their runner.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::pipeline::KnowledgeBase;
use crate::query::QueryMode;
use crate::term::{is_absolute_iri, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CqCase {
    pub id: String,
    #[serde(default)]
    pub question: String,
    pub mode: QueryMode,
    pub query: String,
    /// Select mode: the variable holding the answer. Defaults to the first one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answer_var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub expected: Vec<String>,
}

/// Parses a JSON manifest. Ids must be unique and expected answers absolute IRIs.
pub fn parse_manifest(text: &str) -> Result<Vec<CqCase>, String> {
    let cases: Vec<CqCase> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let mut ids = BTreeSet::new();
    for case in &cases {
        if !ids.insert(case.id.as_str()) {
            return Err(format!("duplicate case id `{}`", case.id));
        }
        if let Some(bad) = case.expected.iter().find(|e| !is_absolute_iri(e)) {
            return Err(format!("case {}: expected answer `{bad}` is not an absolute IRI", case.id));
        }
    }
    Ok(cases)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CqOutcome {
    pub id: String,
    pub mode: QueryMode,
    pub passed: bool,
    pub expected: Vec<String>,
    pub actual: Vec<String>,
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Runs every case against `graph` (usually `kb.materialized`). Outcomes are
/// sorted by id, numbers compared numerically, so case order in the
/// manifest does not matter.
pub fn run_cases(kb: &KnowledgeBase, graph: &Graph, cases: &[CqCase]) -> Vec<CqOutcome> {
    let mut out: Vec<CqOutcome> = cases.iter().map(|c| run_case(kb, graph, c)).collect();
    out.sort_by_key(|o| id_key(&o.id));
    out
}

fn run_case(kb: &KnowledgeBase, graph: &Graph, case: &CqCase) -> CqOutcome {
    let expected: BTreeSet<String> = case.expected.iter().cloned().collect();
    let (actual, error) = match kb.query_over(graph, case.mode, &case.query) {
        Ok(rs) => {
            let terms: BTreeSet<Term> = rs.answers(case.answer_var.as_deref());
            (terms.iter().map(Term::plain).collect::<BTreeSet<String>>(), None)
        }
        Err(e) => (BTreeSet::new(), Some(e.to_string())),
    };
    CqOutcome {
        id: case.id.clone(),
        mode: case.mode,
        passed: error.is_none() && actual == expected,
        missing: expected.difference(&actual).cloned().collect(),
        unexpected: actual.difference(&expected).cloned().collect(),
        expected: expected.into_iter().collect(),
        actual: actual.into_iter().collect(),
        error,
    }
}

fn id_key(id: &str) -> (String, u64, String) {
    let digits_at = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
    let (head, rest) = id.split_at(digits_at);
    let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let n = rest[..end].parse().unwrap_or(0);
    (head.to_string(), n, rest[end..].to_string())
}

/// A plain-text table: one line per case and a summary line.
pub fn render_table(outcomes: &[CqOutcome], shorten: impl Fn(&str) -> String) -> String {
    let mut out = String::new();
    for o in outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        let answers: Vec<String> = o.actual.iter().map(|a| shorten(a)).collect();
        out.push_str(&format!("{status}  {:<5} {:<9} {{{}}}\n", o.id, o.mode.to_string(), answers.join(", ")));
        if let Some(e) = &o.error {
            out.push_str(&format!("      error: {e}\n"));
        }
        for m in &o.missing {
            out.push_str(&format!("      missing: {}\n", shorten(m)));
        }
        for u in &o.unexpected {
            out.push_str(&format!("      unexpected: {}\n", shorten(u)));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.push_str(&format!("{passed}/{} passed\n", outcomes.len()));
    out
}
