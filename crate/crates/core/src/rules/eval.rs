use std::collections::{BTreeMap, BTreeSet};

use crate::graph::Graph;
use crate::rules::{Atom, AtomTerm, BodyAtom, Predicate, Rule};
use crate::term::{Term, Triple};

pub type Bindings = BTreeMap<String, Term>;

/// Applies `rules` stratum by stratum, each to a fixpoint, and returns the
/// input plus everything derived.
pub fn evaluate_rules(graph: &Graph, rules: &[Rule]) -> Graph {
    let mut out = graph.clone();
    let strata: BTreeSet<usize> = rules.iter().map(|r| r.stratum).collect();
    for s in strata {
        let layer: Vec<&Rule> = rules.iter().filter(|r| r.stratum == s).collect();
        run_stratum(&mut out, &layer);
    }
    out
}

fn run_stratum(graph: &mut Graph, rules: &[&Rule]) {
    let mut delta = Graph::new();
    for rule in rules {
        for b in match_body(graph, &rule.body) {
            for t in instantiate(rule, &b) {
                if !graph.contains(&t) {
                    delta.insert_unchecked(t);
                }
            }
        }
    }
    let derived: BTreeSet<Predicate> = rules.iter().flat_map(|r| r.head.iter().map(Atom::predicate)).collect();
    while !delta.is_empty() {
        for t in delta.iter() {
            graph.insert_unchecked(t);
        }
        let mut next = Graph::new();
        for rule in rules {
            let positive: Vec<&Atom> = rule.positive_body().collect();
            for (i, atom) in positive.iter().enumerate() {
                if !derived.contains(&atom.predicate()) {
                    continue;
                }
                for seed in match_atom(&delta, atom, &Bindings::new()) {
                    let rest: Vec<&Atom> = positive
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, a)| *a)
                        .collect();
                    for b in join(graph, &rest, vec![seed]) {
                        if !passes_negation(graph, rule.negative_body(), &b) {
                            continue;
                        }
                        for t in instantiate(rule, &b) {
                            if !graph.contains(&t) {
                                next.insert_unchecked(t);
                            }
                        }
                    }
                }
            }
        }
        delta = next;
    }
}

/// Every binding of the body's variables that satisfies the positive atoms
/// in `graph` and none of the negated ones. Sorted and duplicate-free.
pub fn match_body(graph: &Graph, body: &[BodyAtom]) -> Vec<Bindings> {
    let positive: Vec<&Atom> = body.iter().filter(|b| !b.negated).map(|b| &b.atom).collect();
    let negative: Vec<&Atom> = body.iter().filter(|b| b.negated).map(|b| &b.atom).collect();
    let rows: BTreeSet<Bindings> = join(graph, &positive, vec![Bindings::new()])
        .into_iter()
        .filter(|b| passes_negation(graph, negative.iter().copied(), b))
        .collect();
    rows.into_iter().collect()
}

fn join(graph: &Graph, atoms: &[&Atom], seeds: Vec<Bindings>) -> Vec<Bindings> {
    let mut rows = seeds;
    let mut remaining: Vec<&Atom> = atoms.to_vec();
    while !remaining.is_empty() && !rows.is_empty() {
        // Most constrained atom first, judged against the first row's bound variables.
        let probe = &rows[0];
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, a)| (i, a.args().iter().filter(|t| bound(t, probe).is_some()).count()))
            .max_by_key(|(i, n)| (*n, std::cmp::Reverse(*i)))
            .expect("nonempty");
        let atom = remaining.remove(idx);
        rows = rows.iter().flat_map(|b| match_atom(graph, atom, b)).collect();
    }
    rows
}

fn bound(t: &AtomTerm, b: &Bindings) -> Option<Term> {
    match t {
        AtomTerm::Const(c) => Some(c.clone()),
        AtomTerm::Var(v) => b.get(v).cloned(),
        AtomTerm::Wildcard => None,
    }
}

/// Extensions of `b` that make `atom` a triple of `graph`.
fn match_atom(graph: &Graph, atom: &Atom, b: &Bindings) -> Vec<Bindings> {
    let (s, p, o) = atom.as_pattern();
    let sv = bound(s, b);
    let ov = bound(&o, b);
    let mut out = Vec::new();
    for t in graph.match_pattern(sv.as_ref(), Some(&p), ov.as_ref()) {
        let mut next = b.clone();
        if unify(s, &t.subject, &mut next) && unify(&o, &t.object, &mut next) {
            out.push(next);
        }
    }
    out
}

fn unify(slot: &AtomTerm, value: &Term, b: &mut Bindings) -> bool {
    match slot {
        AtomTerm::Const(c) => c == value,
        AtomTerm::Wildcard => true,
        AtomTerm::Var(v) => match b.get(v) {
            Some(existing) => existing == value,
            None => {
                b.insert(v.clone(), value.clone());
                true
            }
        },
    }
}

fn passes_negation<'a>(graph: &Graph, negative: impl IntoIterator<Item = &'a Atom>, b: &Bindings) -> bool {
    negative.into_iter().all(|atom| match_atom(graph, atom, b).is_empty())
}

/// Head triples for one body match. Heads whose subject would be a literal
/// are dropped.
pub(crate) fn instantiate(rule: &Rule, b: &Bindings) -> Vec<Triple> {
    let mut out = Vec::new();
    for atom in &rule.head {
        let (s, p, o) = atom.as_pattern();
        let (Some(s), Some(o)) = (bound(s, b), bound(&o, b)) else {
            continue;
        };
        if s.is_literal() {
            continue;
        }
        out.push(Triple {
            subject: s,
            predicate: p,
            object: o,
        });
    }
    out
}
