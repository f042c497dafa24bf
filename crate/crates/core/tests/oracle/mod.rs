//! Brute-force reference implementations and random inputs for them.
//!
//! Shared by the property tests here and the acceptance suite in the CLI
//! crate. Everything is written from the rule definitions directly and
//! reads only the graph, never the library's indexes or closures.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use apple_core::ontology::{ClassExpression, NameResolver, PropertyPath};
use apple_core::prefix::vocab;
use apple_core::rules::{parse_rules, Atom, AtomTerm, Rule};
use apple_core::{Graph, Term, Triple};
use rand::seq::SliceRandom;
use rand::Rng;

pub const NS: &str = "http://r.example/";

pub fn iri(local: &str) -> Term {
    Term::iri(format!("{NS}{local}")).unwrap()
}

fn triple(s: &Term, p: &Term, o: &Term) -> Triple {
    Triple::new(s.clone(), p.clone(), o.clone()).unwrap()
}

/// A random graph plus the names it was built from.
#[derive(Debug, Clone)]
pub struct RandomWorld {
    pub graph: Graph,
    pub classes: Vec<Term>,
    pub properties: Vec<Term>,
    pub individuals: Vec<Term>,
}

/// At most 60 triples over at most 8 classes and 6 properties. Subclass
/// edges only point from lower to higher class numbers, so the hierarchy is
/// acyclic; subproperty edges may form cycles.
pub fn random_world(rng: &mut impl Rng) -> RandomWorld {
    let classes: Vec<Term> = (0..rng.gen_range(1..=8)).map(|i| iri(&format!("C{i}"))).collect();
    let properties: Vec<Term> = (0..rng.gen_range(1..=6)).map(|i| iri(&format!("p{i}"))).collect();
    let individuals: Vec<Term> = (0..rng.gen_range(1..=8)).map(|i| iri(&format!("x{i}"))).collect();
    let literals = [Term::literal("a"), Term::literal("b")];
    let target = rng.gen_range(0..=60usize);
    let mut graph = Graph::new();
    let mut attempts = 0;
    while graph.len() < target && attempts < 400 {
        attempts += 1;
        let t = match rng.gen_range(0..100) {
            0..=9 => {
                let i = rng.gen_range(0..classes.len());
                let j = rng.gen_range(0..classes.len());
                if i >= j {
                    continue;
                }
                triple(&classes[i], &vocab::sub_class_of(), &classes[j])
            }
            10..=14 => triple(
                properties.choose(rng).unwrap(),
                &vocab::sub_property_of(),
                properties.choose(rng).unwrap(),
            ),
            15..=19 => triple(properties.choose(rng).unwrap(), &vocab::domain(), classes.choose(rng).unwrap()),
            20..=24 => triple(properties.choose(rng).unwrap(), &vocab::range(), classes.choose(rng).unwrap()),
            25..=28 => triple(
                properties.choose(rng).unwrap(),
                &vocab::inverse_of(),
                properties.choose(rng).unwrap(),
            ),
            29..=54 => triple(individuals.choose(rng).unwrap(), &vocab::rdf_type(), classes.choose(rng).unwrap()),
            55..=58 => triple(
                individuals.choose(rng).unwrap(),
                properties.choose(rng).unwrap(),
                literals.choose(rng).unwrap(),
            ),
            _ => triple(
                individuals.choose(rng).unwrap(),
                properties.choose(rng).unwrap(),
                individuals.choose(rng).unwrap(),
            ),
        };
        graph.insert(t).unwrap();
    }
    RandomWorld {
        graph,
        classes,
        properties,
        individuals,
    }
}

/// Applies every entailment rule to the whole graph until nothing changes.
/// Schema facts are read from the current graph on each pass.
pub fn naive_materialize(graph: &Graph) -> Graph {
    let rdf_type = vocab::rdf_type();
    let sc = vocab::sub_class_of();
    let sp = vocab::sub_property_of();
    let builtin = |t: &Term| vocab::is_builtin(t);
    let mut g = graph.clone();
    loop {
        let triples: Vec<Triple> = g.iter().collect();
        let mut new = Vec::new();
        for t in &triples {
            for u in &triples {
                // subclass transitivity over named classes
                if t.predicate == sc
                    && u.predicate == sc
                    && t.object == u.subject
                    && t.subject.is_iri()
                    && t.object.is_iri()
                    && u.object.is_iri()
                    && t.subject != u.object
                {
                    new.push(triple(&t.subject, &sc, &u.object));
                }
                // type inheritance
                if t.predicate == rdf_type
                    && u.predicate == sc
                    && u.subject == t.object
                    && u.subject.is_iri()
                    && u.object.is_iri()
                    && u.subject != u.object
                {
                    new.push(triple(&t.subject, &rdf_type, &u.object));
                }
                if builtin(&t.predicate) || !t.predicate.is_iri() {
                    continue;
                }
                // subproperty propagation
                if u.predicate == sp && u.subject == t.predicate && u.object.is_iri() && u.object != t.predicate {
                    new.push(triple(&t.subject, &u.object, &t.object));
                }
                // domain typing
                if u.predicate == vocab::domain() && u.subject == t.predicate && u.object.is_iri() && !builtin(&u.object) {
                    new.push(triple(&t.subject, &rdf_type, &u.object));
                }
                if t.object.is_literal() {
                    continue;
                }
                // range typing
                if u.predicate == vocab::range() && u.subject == t.predicate && u.object.is_iri() && !builtin(&u.object) {
                    new.push(triple(&t.object, &rdf_type, &u.object));
                }
                // inverse propagation, either direction of owl:inverseOf
                if u.predicate == vocab::inverse_of() && u.subject.is_iri() && u.object.is_iri() {
                    if u.subject == t.predicate {
                        new.push(triple(&t.object, &u.object, &t.subject));
                    }
                    if u.object == t.predicate {
                        new.push(triple(&t.object, &u.subject, &t.subject));
                    }
                }
            }
        }
        let before = g.len();
        for t in new {
            g.insert(t).unwrap();
        }
        if g.len() == before {
            return g;
        }
    }
}

/// Random class expression over the world's names, nesting at most `depth` levels.
pub fn random_expression(rng: &mut impl Rng, w: &RandomWorld, depth: u32) -> ClassExpression {
    let leaf = depth == 0;
    match rng.gen_range(0..if leaf { 3 } else { 6 }) {
        0 => ClassExpression::Named(w.classes.choose(rng).unwrap().clone()),
        1 => {
            let n = rng.gen_range(1..=3);
            let items: Vec<Term> = (0..n).map(|_| w.individuals.choose(rng).unwrap().clone()).collect();
            ClassExpression::one_of(items).unwrap()
        }
        2 => ClassExpression::Anything,
        3 | 4 => {
            let p = w.properties.choose(rng).unwrap().clone();
            let path = if rng.gen_bool(0.4) {
                PropertyPath::inverse(p)
            } else {
                PropertyPath::forward(p)
            };
            ClassExpression::some(path, random_expression(rng, w, depth - 1))
        }
        _ => {
            let n = rng.gen_range(2..=3);
            ClassExpression::and((0..n).map(|_| random_expression(rng, w, depth - 1)).collect())
        }
    }
}

/// Does individual `x` satisfy `e` in the closed world of `g`? Literals
/// satisfy only the unconstrained filler.
pub fn satisfies(x: &Term, e: &ClassExpression, g: &Graph) -> bool {
    if x.is_literal() {
        return matches!(e, ClassExpression::Anything);
    }
    match e {
        ClassExpression::Anything => true,
        ClassExpression::Named(c) => g.iter().any(|t| t.subject == *x && t.predicate == vocab::rdf_type() && t.object == *c),
        ClassExpression::OneOf(set) => set.contains(x),
        ClassExpression::And(parts) => parts.iter().all(|p| satisfies(x, p, g)),
        ClassExpression::Some { path, filler } => g.iter().any(|t| {
            t.predicate == path.property
                && if path.inverted {
                    t.object == *x && satisfies(&t.subject, filler, g)
                } else {
                    t.subject == *x && satisfies(&t.object, filler, g)
                }
        }),
    }
}

/// Every non-literal node of `g` that satisfies `e`, checked one at a time.
pub fn brute_force_instances(e: &ClassExpression, g: &Graph) -> BTreeSet<Term> {
    let mut nodes = BTreeSet::new();
    for t in g.iter() {
        nodes.insert(t.subject);
        nodes.insert(t.object);
    }
    nodes
        .into_iter()
        .filter(|n| !n.is_literal() && satisfies(n, e, g))
        .collect()
}

/// Random rule text over the world's names plus derived predicates `D0`,
/// `D1` and `q0`. Up to three variables per rule keep grounding cheap.
pub fn random_rule_text(rng: &mut impl Rng, w: &RandomWorld) -> String {
    let vars = ["?x", "?y", "?z"];
    let local = |t: &Term| t.value().strip_prefix(NS).unwrap().to_string();
    let class_names: Vec<String> = w.classes.iter().map(local).chain(["D0".into(), "D1".into()]).collect();
    let prop_names: Vec<String> = w.properties.iter().map(local).chain(["q0".into()]).collect();
    let mut text = String::new();
    for r in 0..rng.gen_range(1..=4) {
        let mut body = Vec::new();
        let mut bound: Vec<&str> = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            if rng.gen_bool(0.4) {
                let v = vars.choose(rng).unwrap();
                body.push(format!("{}({v})", class_names.choose(rng).unwrap()));
                bound.push(v);
            } else {
                let a = vars.choose(rng).unwrap();
                let b = if rng.gen_bool(0.2) {
                    local(w.individuals.choose(rng).unwrap())
                } else {
                    let v = vars.choose(rng).unwrap();
                    bound.push(v);
                    v.to_string()
                };
                body.push(format!("{}({a}, {b})", prop_names.choose(rng).unwrap()));
                bound.push(a);
            }
        }
        if rng.gen_bool(0.5) {
            let v = bound.choose(rng).unwrap();
            if rng.gen_bool(0.5) {
                body.push(format!("not {}({v})", class_names.choose(rng).unwrap()));
            } else {
                let other = if rng.gen_bool(0.5) { "_" } else { bound.choose(rng).unwrap() };
                body.push(format!("not {}({v}, {other})", prop_names.choose(rng).unwrap()));
            }
        }
        let head = if rng.gen_bool(0.6) {
            format!("{}({})", ["D0", "D1"].choose(rng).unwrap(), bound.choose(rng).unwrap())
        } else {
            format!("q0({}, {})", bound.choose(rng).unwrap(), bound.choose(rng).unwrap())
        };
        text.push_str(&format!("G{r}: {} -> {head} .\n", body.join(", ")));
    }
    text
}

pub fn names() -> NameResolver {
    NameResolver {
        default_namespace: NS.to_string(),
        ..NameResolver::default()
    }
}

/// A random rule set that parses (safe and stratifiable).
pub fn random_rules(rng: &mut impl Rng, w: &RandomWorld) -> Vec<Rule> {
    loop {
        if let Ok(rules) = parse_rules(&random_rule_text(rng, w), &names()) {
            return rules;
        }
    }
}

/// Stratum by stratum, grounds every rule over the active domain and fires
/// it until nothing changes.
pub fn grounding_evaluate(graph: &Graph, rules: &[Rule]) -> Graph {
    let mut g = graph.clone();
    let strata: BTreeSet<usize> = rules.iter().map(|r| r.stratum).collect();
    for s in strata {
        loop {
            let before = g.len();
            for rule in rules.iter().filter(|r| r.stratum == s) {
                let mut domain: BTreeSet<Term> = g.iter().flat_map(|t| [t.subject, t.object]).collect();
                for b in &rule.body {
                    for a in b.atom.args() {
                        if let AtomTerm::Const(c) = a {
                            domain.insert(c.clone());
                        }
                    }
                }
                let domain: Vec<Term> = domain.into_iter().collect();
                let vars: Vec<String> = rule
                    .body
                    .iter()
                    .flat_map(|b| b.atom.vars())
                    .map(str::to_string)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let mut heads = Vec::new();
                ground(rule, &vars, &domain, &mut BTreeMap::new(), &g, &mut heads);
                for t in heads {
                    g.insert(t).unwrap();
                }
            }
            if g.len() == before {
                break;
            }
        }
    }
    g
}

fn ground(
    rule: &Rule,
    vars: &[String],
    domain: &[Term],
    assignment: &mut BTreeMap<String, Term>,
    g: &Graph,
    heads: &mut Vec<Triple>,
) {
    // Prune as soon as a fully bound positive atom fails.
    for b in rule.body.iter().filter(|b| !b.negated) {
        if b.atom.vars().iter().all(|v| assignment.contains_key(*v)) && !holds(&b.atom, assignment, g) {
            return;
        }
    }
    if assignment.len() == vars.len() {
        if rule.body.iter().filter(|b| b.negated).any(|b| holds(&b.atom, assignment, g)) {
            return;
        }
        for h in &rule.head {
            let (s, p, o) = h.as_pattern();
            let s = value(s, assignment).unwrap();
            let o = value(&o, assignment).unwrap();
            if !s.is_literal() {
                heads.push(Triple::new(s, p, o).unwrap());
            }
        }
        return;
    }
    let next = &vars[assignment.len()];
    for d in domain {
        assignment.insert(next.clone(), d.clone());
        ground(rule, vars, domain, assignment, g, heads);
        assignment.remove(next);
    }
}

fn value(t: &AtomTerm, a: &BTreeMap<String, Term>) -> Option<Term> {
    match t {
        AtomTerm::Var(v) => a.get(v).cloned(),
        AtomTerm::Const(c) => Some(c.clone()),
        AtomTerm::Wildcard => None,
    }
}

/// Some triple matches the atom under `a`; wildcards match anything.
fn holds(atom: &Atom, a: &BTreeMap<String, Term>, g: &Graph) -> bool {
    let (s, p, o) = atom.as_pattern();
    let s = value(s, a);
    let o = value(&o, a);
    g.iter().any(|t| {
        t.predicate == p && s.as_ref().is_none_or(|s| *s == t.subject) && o.as_ref().is_none_or(|o| *o == t.object)
    })
}

/// Nested-loop evaluation of triple patterns given as (s, p, o) with `?v`
/// strings for variables.
pub fn nested_loop_select(patterns: &[[Result<Term, String>; 3]], g: &Graph) -> BTreeSet<BTreeMap<String, Term>> {
    let triples: Vec<Triple> = g.iter().collect();
    let mut rows: Vec<BTreeMap<String, Term>> = vec![BTreeMap::new()];
    for pat in patterns {
        let mut next = Vec::new();
        for row in &rows {
            'triples: for t in &triples {
                let mut r = row.clone();
                for (slot, val) in pat.iter().zip([&t.subject, &t.predicate, &t.object]) {
                    match slot {
                        Ok(c) if c != val => continue 'triples,
                        Ok(_) => {}
                        Err(v) => match r.get(v) {
                            Some(b) if b != val => continue 'triples,
                            Some(_) => {}
                            None => {
                                r.insert(v.clone(), val.clone());
                            }
                        },
                    }
                }
                next.push(r);
            }
        }
        rows = next;
    }
    rows.into_iter().collect()
}
