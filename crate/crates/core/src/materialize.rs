//! Forward chaining of the schema entailments to a fixpoint.
//!
//! Every rule except subclass transitivity has a single data premise and
//! reads the rest from the [`SchemaIndex`], so each new triple only has to be
//! looked at once. Transitivity joins the new edge with the edges already
//! derived. Existential restrictions never create individuals here; they are
//! audited by the validator.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::Graph;
use crate::ontology::SchemaIndex;
use crate::prefix::vocab;
use crate::term::{Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntailmentRule {
    SubclassTransitivity,
    TypeInheritance,
    SubpropertyPropagation,
    DomainTyping,
    RangeTyping,
    InversePropagation,
}

impl EntailmentRule {
    pub const ALL: [EntailmentRule; 6] = [
        EntailmentRule::SubclassTransitivity,
        EntailmentRule::TypeInheritance,
        EntailmentRule::SubpropertyPropagation,
        EntailmentRule::DomainTyping,
        EntailmentRule::RangeTyping,
        EntailmentRule::InversePropagation,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentRegime {
    pub enabled: BTreeSet<EntailmentRule>,
}

impl Default for EntailmentRegime {
    fn default() -> Self {
        EntailmentRegime {
            enabled: EntailmentRule::ALL.into_iter().collect(),
        }
    }
}

impl EntailmentRegime {
    pub fn none() -> EntailmentRegime {
        EntailmentRegime {
            enabled: BTreeSet::new(),
        }
    }

    pub fn only(rules: &[EntailmentRule]) -> EntailmentRegime {
        EntailmentRegime {
            enabled: rules.iter().copied().collect(),
        }
    }

    pub fn has(&self, rule: EntailmentRule) -> bool {
        self.enabled.contains(&rule)
    }
}

/// Everything one rule application derives from `t` alone. Used by
/// [`materialize`] and exposed so tests can drive a naive fixpoint with the
/// exact same rule bodies.
///
/// Subclass transitivity is not included: it needs a second premise.
pub fn consequences(t: &Triple, schema: &SchemaIndex, regime: &EntailmentRegime) -> Vec<Triple> {
    let mut out = Vec::new();
    let rdf_type = vocab::rdf_type();
    if t.predicate == rdf_type {
        if regime.has(EntailmentRule::TypeInheritance) {
            for sup in schema.super_classes(&t.object) {
                out.push(triple(&t.subject, &rdf_type, sup));
            }
        }
        return out;
    }
    if vocab::is_builtin(&t.predicate) {
        return out;
    }
    if regime.has(EntailmentRule::SubpropertyPropagation) {
        for q in schema.super_properties(&t.predicate) {
            out.push(triple(&t.subject, q, &t.object));
        }
    }
    if regime.has(EntailmentRule::DomainTyping) {
        for c in schema.domains(&t.predicate).filter(|c| !vocab::is_builtin(c)) {
            out.push(triple(&t.subject, &rdf_type, c));
        }
    }
    if t.object.is_literal() {
        return out;
    }
    if regime.has(EntailmentRule::RangeTyping) {
        for c in schema.ranges(&t.predicate).filter(|c| !vocab::is_builtin(c)) {
            out.push(triple(&t.object, &rdf_type, c));
        }
    }
    if regime.has(EntailmentRule::InversePropagation) {
        for q in schema.inverses(&t.predicate) {
            out.push(triple(&t.object, q, &t.subject));
        }
    }
    out
}

/// Is `t` an edge subclass transitivity chains over?
pub fn is_class_edge(t: &Triple) -> bool {
    t.predicate == vocab::sub_class_of() && t.subject.is_iri() && t.object.is_iri() && t.subject != t.object
}

/// The least fixpoint of the enabled rules over `graph`. The input is not changed.
pub fn materialize(graph: &Graph, schema: &SchemaIndex, regime: &EntailmentRegime) -> Graph {
    let mut out = graph.clone();
    let mut queue: VecDeque<Triple> = graph.iter().collect();
    let sub_class_of = vocab::sub_class_of();
    let transitive = regime.has(EntailmentRule::SubclassTransitivity);

    while let Some(t) = queue.pop_front() {
        let mut derived = consequences(&t, schema, regime);
        if transitive && is_class_edge(&t) {
            for up in out.objects(&t.object, &sub_class_of).filter(|c| c.is_iri()) {
                derived.push(triple(&t.subject, &sub_class_of, up));
            }
            for down in out.subjects(&sub_class_of, &t.subject).filter(|c| c.is_iri()) {
                derived.push(triple(down, &sub_class_of, &t.object));
            }
        }
        for d in derived {
            if d.predicate == sub_class_of && d.subject == d.object {
                continue;
            }
            if out.insert_unchecked(d.clone()) {
                queue.push_back(d);
            }
        }
    }
    out
}

/// Whether `t` holds in the materialization of `graph` under the full regime.
pub fn entails(graph: &Graph, t: &Triple, schema: &SchemaIndex) -> bool {
    graph.contains(t) || materialize(graph, schema, &EntailmentRegime::default()).contains(t)
}

fn triple(s: &Term, p: &Term, o: &Term) -> Triple {
    Triple {
        subject: s.clone(),
        predicate: p.clone(),
        object: o.clone(),
    }
}
