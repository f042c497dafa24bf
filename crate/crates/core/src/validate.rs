//! Disjointness clashes and closed-world audits of existential restrictions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::Graph;
use crate::ontology::{Obligation, SchemaIndex};
use crate::prefix::vocab;
use crate::term::{Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum World {
    Open,
    Closed,
}

impl std::str::FromStr for World {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(World::Open),
            "closed" => Ok(World::Closed),
            other => Err(format!("unknown world `{other}` (open, closed)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DisjointnessClash,
    UnsatisfiedObligation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum ViolationDetail {
    /// The classes of one disjoint set the subject belongs to.
    Clash { classes: Vec<Term> },
    Obligation { class: Term, property: Term, filler: Term },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: Term,
    pub detail: ViolationDetail,
    pub severity: Severity,
}

/// One violation per individual and disjoint set it breaks.
pub fn check_disjointness(graph: &Graph, schema: &SchemaIndex) -> Vec<Violation> {
    let rdf_type = vocab::rdf_type();
    let mut out = BTreeSet::new();
    for set in &schema.disjoint_sets {
        let mut memberships: BTreeMap<&Term, Vec<Term>> = BTreeMap::new();
        for class in set {
            for x in graph.subjects(&rdf_type, class) {
                memberships.entry(x).or_default().push(class.clone());
            }
        }
        for (x, classes) in memberships {
            if classes.len() >= 2 {
                out.insert(Violation {
                    kind: ViolationKind::DisjointnessClash,
                    subject: x.clone(),
                    detail: ViolationDetail::Clash { classes },
                    severity: Severity::Error,
                });
            }
        }
    }
    out.into_iter().collect()
}

/// Closed world: a warning for every instance of an obligation's class with
/// no link to an instance of the filler. Open world: nothing.
pub fn check_obligations(graph: &Graph, schema: &SchemaIndex, world: World) -> Vec<Violation> {
    check_obligations_for(graph, schema, world, None)
}

/// As [`check_obligations`], auditing only the individuals in `scope` when given.
pub fn check_obligations_for(
    graph: &Graph,
    schema: &SchemaIndex,
    world: World,
    scope: Option<&BTreeSet<Term>>,
) -> Vec<Violation> {
    if world == World::Open {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for (x, o) in obligation_instances(graph, schema, scope) {
        if witnesses(graph, &x, o).is_empty() {
            out.insert(Violation {
                kind: ViolationKind::UnsatisfiedObligation,
                subject: x,
                detail: ViolationDetail::Obligation {
                    class: o.class.clone(),
                    property: o.property.clone(),
                    filler: o.filler.clone(),
                },
                severity: Severity::Warning,
            });
        }
    }
    out.into_iter().collect()
}

fn obligation_instances<'a>(
    graph: &Graph,
    schema: &'a SchemaIndex,
    scope: Option<&BTreeSet<Term>>,
) -> Vec<(Term, &'a Obligation)> {
    let rdf_type = vocab::rdf_type();
    let mut out = Vec::new();
    for o in &schema.existential_obligations {
        for x in graph.subjects(&rdf_type, &o.class) {
            if scope.is_none_or(|s| s.contains(x)) {
                out.push((x.clone(), o));
            }
        }
    }
    out
}

/// Objects `y` of `x`'s property links that make obligation `o` hold.
fn witnesses(graph: &Graph, x: &Term, o: &Obligation) -> Vec<Term> {
    let rdf_type = vocab::rdf_type();
    graph
        .objects(x, &o.property)
        .filter(|y| o.filler == vocab::owl_thing() || graph.contains_terms(y, &rdf_type, &o.filler))
        .cloned()
        .collect()
}

/// Asserted triples that alone carry some audited obligation: the
/// obligation has a single witness, and exactly one asserted triple (the
/// link itself, a subproperty of it, or an inverse of either) produces the
/// witnessing edge. Removing any of them leaves that obligation unmet.
///
/// `materialized` must be the materialization of `asserted`.
pub fn obligation_witnesses(
    asserted: &Graph,
    materialized: &Graph,
    schema: &SchemaIndex,
    scope: Option<&BTreeSet<Term>>,
) -> Vec<Triple> {
    let mut out = BTreeSet::new();
    for (x, o) in obligation_instances(materialized, schema, scope) {
        let w = witnesses(materialized, &x, o);
        let [y] = w.as_slice() else {
            continue;
        };
        let mut sources = Vec::new();
        for t in asserted.match_pattern(Some(&x), None, Some(y)) {
            if schema.is_subproperty(&t.predicate, &o.property) {
                sources.push(t);
            }
        }
        for t in asserted.match_pattern(Some(y), None, Some(&x)) {
            if schema
                .inverses(&t.predicate)
                .any(|q| schema.is_subproperty(q, &o.property))
            {
                sources.push(t);
            }
        }
        if let [only] = sources.as_slice() {
            out.insert(only.clone());
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
    pub triples: usize,
    pub role: DocumentRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentRole {
    /// Declares classes or properties, or states axioms.
    Schema,
    /// Only describes individuals; audited in the closed world.
    Data,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ViolationCounts {
    pub disjointness_clash: usize,
    pub unsatisfied_obligation: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub world: World,
    pub inputs: Vec<InputDigest>,
    pub consistent: bool,
    pub counts: ViolationCounts,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(world: World, inputs: Vec<InputDigest>, mut violations: Vec<Violation>) -> ValidationReport {
        violations.sort();
        let count = |k| violations.iter().filter(|v| v.kind == k).count();
        let counts = ViolationCounts {
            disjointness_clash: count(ViolationKind::DisjointnessClash),
            unsatisfied_obligation: count(ViolationKind::UnsatisfiedObligation),
        };
        ValidationReport {
            world,
            inputs,
            consistent: counts.disjointness_clash == 0,
            counts,
            violations,
        }
    }

    pub fn errors(&self) -> usize {
        self.violations.iter().filter(|v| v.severity == Severity::Error).count()
    }

    pub fn warnings(&self) -> usize {
        self.violations.iter().filter(|v| v.severity == Severity::Warning).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
