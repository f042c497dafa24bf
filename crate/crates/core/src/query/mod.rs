//! Class-expression queries and basic graph pattern selects.
//!
//! Instance retrieval is closed-world set algebra over the (materialized)
//! graph. Class retrieval is structural: it reads the asserted subclass
//! closure, the existential restrictions and class-level (punned) edges,
//! and never runs a tableau, so it only finds what the taxonomy states.

mod eval;
mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::ontology::{ClassExpression, NameResolver, SchemaIndex};
use crate::term::Term;

pub use eval::{class_entails, retrieve_classes, retrieve_instances, select};
pub use parser::{parse_class_expression, parse_patterns};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct QueryError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl QueryError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> QueryError {
        QueryError {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryMode {
    Instances,
    Classes,
    Select,
}

impl std::str::FromStr for QueryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "instances" => Ok(QueryMode::Instances),
            "classes" => Ok(QueryMode::Classes),
            "select" => Ok(QueryMode::Select),
            other => Err(format!("unknown query mode `{other}` (instances, classes, select)")),
        }
    }
}

impl<'de> serde::Deserialize<'de> for QueryMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn terms(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> Vec<&str> {
        self.terms()
            .into_iter()
            .filter_map(|t| match t {
                PatternTerm::Var(v) => Some(v.as_str()),
                PatternTerm::Const(_) => None,
            })
            .collect()
    }
}

/// Variables of `patterns` in order of first appearance.
pub fn pattern_vars(patterns: &[TriplePattern]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in patterns.iter().flat_map(TriplePattern::vars) {
        if !out.iter().any(|o| o == v) {
            out.push(v.to_string());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryBody {
    Expression(ClassExpression),
    Patterns(Vec<TriplePattern>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub mode: QueryMode,
    pub body: QueryBody,
}

impl Query {
    pub fn parse(mode: QueryMode, text: &str, names: &NameResolver) -> Result<Query, QueryError> {
        let body = match mode {
            QueryMode::Select => QueryBody::Patterns(parse_patterns(text, names)?),
            _ => QueryBody::Expression(parse_class_expression(text, names)?),
        };
        Ok(Query { mode, body })
    }

    pub fn run(&self, graph: &Graph, schema: &SchemaIndex) -> ResultSet {
        match (&self.body, self.mode) {
            (QueryBody::Patterns(p), _) => ResultSet::Rows {
                vars: pattern_vars(p),
                rows: select(p, graph),
            },
            (QueryBody::Expression(e), QueryMode::Classes) => {
                ResultSet::Terms(retrieve_classes(e, schema, graph).into_iter().collect())
            }
            (QueryBody::Expression(e), _) => ResultSet::Terms(retrieve_instances(e, graph).into_iter().collect()),
        }
    }
}

pub type Row = BTreeMap<String, Term>;

/// Sorted, duplicate-free query answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResultSet {
    Terms(Vec<Term>),
    Rows { vars: Vec<String>, rows: Vec<Row> },
}

impl ResultSet {
    pub fn len(&self) -> usize {
        match self {
            ResultSet::Terms(t) => t.len(),
            ResultSet::Rows { rows, .. } => rows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The answer set as terms: the terms themselves, or the values bound to
    /// `var` across rows.
    pub fn answers(&self, var: Option<&str>) -> BTreeSet<Term> {
        match self {
            ResultSet::Terms(t) => t.iter().cloned().collect(),
            ResultSet::Rows { vars, rows } => {
                let Some(var) = var.or(vars.first().map(String::as_str)) else {
                    return BTreeSet::new();
                };
                rows.iter().filter_map(|r| r.get(var).cloned()).collect()
            }
        }
    }

    /// A JSON array: strings for term results, objects for rows.
    pub fn to_json(&self) -> String {
        let value = match self {
            ResultSet::Terms(t) => serde_json::to_value(t),
            ResultSet::Rows { rows, .. } => serde_json::to_value(rows),
        };
        let mut s = serde_json::to_string_pretty(&value.expect("terms serialize")).expect("json");
        s.push('\n');
        s
    }

    /// One answer per line; rows get a `?var` header line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        match self {
            ResultSet::Terms(t) => {
                for term in t {
                    out.push_str(&term.plain());
                    out.push('\n');
                }
            }
            ResultSet::Rows { vars, rows } => {
                let header: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
                out.push_str(&header.join("\t"));
                out.push('\n');
                for row in rows {
                    let cells: Vec<String> = vars
                        .iter()
                        .map(|v| row.get(v).map(|t| t.plain()).unwrap_or_default())
                        .collect();
                    out.push_str(&cells.join("\t"));
                    out.push('\n');
                }
            }
        }
        out
    }
}

impl fmt::Display for QueryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryMode::Instances => "instances",
            QueryMode::Classes => "classes",
            QueryMode::Select => "select",
        })
    }
}
