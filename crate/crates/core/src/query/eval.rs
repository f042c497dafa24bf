use std::collections::BTreeSet;

use crate::graph::Graph;
use crate::ontology::{ClassExpression, PropertyPath, SchemaIndex};
use crate::prefix::vocab;
use crate::query::{PatternTerm, Row, TriplePattern};
use crate::term::Term;

/// Individuals (IRI and blank nodes of `graph`) satisfying `expr` when the
/// graph is read as a closed world.
pub fn retrieve_instances(expr: &ClassExpression, graph: &Graph) -> BTreeSet<Term> {
    let universe: BTreeSet<Term> = graph.nodes().into_iter().filter(|n| !n.is_literal()).collect();
    extension(expr, graph, &universe)
}

fn extension(expr: &ClassExpression, graph: &Graph, universe: &BTreeSet<Term>) -> BTreeSet<Term> {
    match expr {
        ClassExpression::Anything => universe.clone(),
        ClassExpression::Named(c) => graph.subjects(&vocab::rdf_type(), c).cloned().collect(),
        ClassExpression::OneOf(set) => set.intersection(universe).cloned().collect(),
        ClassExpression::And(parts) => {
            // Nominal-rooted and otherwise small conjuncts first keeps the sets small.
            let mut exts: Vec<BTreeSet<Term>> = parts.iter().map(|p| extension(p, graph, universe)).collect();
            exts.sort_by_key(BTreeSet::len);
            let mut iter = exts.into_iter();
            let first = iter.next().unwrap_or_default();
            iter.fold(first, |acc, e| acc.intersection(&e).cloned().collect())
        }
        ClassExpression::Some { path, filler } => {
            let mut out = BTreeSet::new();
            if matches!(filler.as_ref(), ClassExpression::Anything) {
                for (s, o) in graph.pairs(&path.property) {
                    out.insert(if path.inverted { o.clone() } else { s.clone() });
                }
            } else {
                for y in extension(filler, graph, universe) {
                    if path.inverted {
                        out.extend(graph.objects(&y, &path.property).cloned());
                    } else {
                        out.extend(graph.subjects(&path.property, &y).cloned());
                    }
                }
            }
            out.retain(|x| !x.is_literal());
            out
        }
    }
}

/// Named classes structurally entailed to satisfy `expr`. A class equal to
/// one of the expression's top-level named conjuncts is not reported, so
/// `Ethics` yields the strict subclasses of `Ethics`.
pub fn retrieve_classes(expr: &ClassExpression, schema: &SchemaIndex, graph: &Graph) -> BTreeSet<Term> {
    let named: BTreeSet<&Term> = expr
        .conjuncts()
        .iter()
        .filter_map(|c| match c {
            ClassExpression::Named(t) => Some(t),
            _ => None,
        })
        .collect();
    schema
        .classes
        .iter()
        .filter(|c| c.is_iri() && !vocab::is_builtin(c) && !named.contains(c))
        .filter(|c| class_entails(c, expr, schema, graph))
        .cloned()
        .collect()
}

/// Whether class `c` satisfies `expr` by the asserted axioms: named
/// conjuncts through the subclass closure, restrictions through existential
/// obligations (inherited, with subproperty and inverse matching) or through
/// class-level edges.
pub fn class_entails(c: &Term, expr: &ClassExpression, schema: &SchemaIndex, graph: &Graph) -> bool {
    match expr {
        ClassExpression::Anything => true,
        ClassExpression::Named(d) => schema.is_subclass(c, d),
        ClassExpression::OneOf(set) => set.contains(c),
        ClassExpression::And(parts) => parts.iter().all(|p| class_entails(c, p, schema, graph)),
        ClassExpression::Some { path, filler } => {
            obligation_route(c, path, filler, schema, graph) || class_edge_route(c, path, filler, schema, graph)
        }
    }
}

fn obligation_route(
    c: &Term,
    path: &PropertyPath,
    filler: &ClassExpression,
    schema: &SchemaIndex,
    graph: &Graph,
) -> bool {
    schema.obligations_for(c).any(|o| {
        let matches = if path.inverted {
            schema.inverses(&o.property).any(|q| schema.is_subproperty(q, &path.property))
        } else {
            schema.is_subproperty(&o.property, &path.property)
        };
        matches && class_entails(&o.filler, filler, schema, graph)
    })
}

fn class_edge_route(
    c: &Term,
    path: &PropertyPath,
    filler: &ClassExpression,
    schema: &SchemaIndex,
    graph: &Graph,
) -> bool {
    let targets: Vec<&Term> = if path.inverted {
        graph.subjects(&path.property, c).collect()
    } else {
        graph.objects(c, &path.property).collect()
    };
    if targets.is_empty() {
        return false;
    }
    let instances = retrieve_instances(filler, graph);
    targets.into_iter().any(|y| {
        matches!(filler, ClassExpression::Anything)
            || instances.contains(y)
            || (schema.classes.contains(y) && class_entails(y, filler, schema, graph))
    })
}

/// Conjunctive match of `patterns` against `graph`. Rows are sorted and
/// unique; no patterns give one empty row.
pub fn select(patterns: &[TriplePattern], graph: &Graph) -> Vec<Row> {
    let mut rows = vec![Row::new()];
    let mut remaining: Vec<&TriplePattern> = patterns.iter().collect();
    while !remaining.is_empty() && !rows.is_empty() {
        let probe = &rows[0];
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.terms().iter().filter(|t| bound(t, probe).is_some()).count()))
            .max_by_key(|(i, n)| (*n, std::cmp::Reverse(*i)))
            .expect("nonempty");
        let pattern = remaining.remove(idx);
        rows = rows.iter().flat_map(|r| extend(graph, pattern, r)).collect();
    }
    let unique: BTreeSet<Row> = rows.into_iter().collect();
    unique.into_iter().collect()
}

fn bound(t: &PatternTerm, row: &Row) -> Option<Term> {
    match t {
        PatternTerm::Const(c) => Some(c.clone()),
        PatternTerm::Var(v) => row.get(v).cloned(),
    }
}

fn extend(graph: &Graph, pattern: &TriplePattern, row: &Row) -> Vec<Row> {
    let [s, p, o] = pattern.terms().map(|t| bound(t, row));
    let mut out = Vec::new();
    for t in graph.match_pattern(s.as_ref(), p.as_ref(), o.as_ref()) {
        let mut next = row.clone();
        let ok = [
            (&pattern.subject, &t.subject),
            (&pattern.predicate, &t.predicate),
            (&pattern.object, &t.object),
        ]
        .into_iter()
        .all(|(slot, value)| match slot {
            PatternTerm::Const(c) => c == value,
            PatternTerm::Var(v) => match next.get(v) {
                Some(existing) => existing == value,
                None => {
                    next.insert(v.clone(), value.clone());
                    true
                }
            },
        });
        if ok {
            out.push(next);
        }
    }
    out
}
