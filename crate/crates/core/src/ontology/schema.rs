use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::Graph;
use crate::prefix::vocab;
use crate::term::{Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("subclass cycle: {}", .0.join(" -> "))]
    SubclassCycle(Vec<String>),
    #[error("existential restriction on <{class}> uses undeclared {what} <{entity}>")]
    UndeclaredEntity {
        class: String,
        what: &'static str,
        entity: String,
    },
    #[error("malformed restriction {0}: needs exactly one owl:onProperty IRI and one owl:someValuesFrom class IRI")]
    MalformedRestriction(String),
}

/// `class ⊑ ∃property.filler`, audited rather than materialized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obligation {
    pub class: Term,
    pub property: Term,
    pub filler: Term,
}

/// Schema axioms pulled out of a graph, plus their closures.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemaIndex {
    /// Asserted named subclass pairs; reflexive entries dropped.
    pub sub_class_of: BTreeSet<(Term, Term)>,
    pub sub_property_of: BTreeSet<(Term, Term)>,
    pub domain_of: BTreeMap<Term, BTreeSet<Term>>,
    pub range_of: BTreeMap<Term, BTreeSet<Term>>,
    /// Asserted `owl:inverseOf` pairs as written.
    pub inverse_of: BTreeSet<(Term, Term)>,
    /// Maximal sets of pairwise-disjoint classes.
    pub disjoint_sets: Vec<BTreeSet<Term>>,
    pub existential_obligations: Vec<Obligation>,
    /// Non-schema triples whose subject is a class (punning).
    pub class_level_triples: Vec<Triple>,
    /// Every IRI used as a class: declared, typed against, or in a subclass/domain/range/restriction axiom.
    pub classes: BTreeSet<Term>,
    /// Every IRI used as a property: declared, or appearing in predicate position or a property axiom.
    pub properties: BTreeSet<Term>,
    /// Properties carrying an explicit declaration triple.
    pub declared_properties: BTreeSet<Term>,
    /// Classes carrying an explicit declaration triple.
    pub declared_classes: BTreeSet<Term>,
    super_classes: BTreeMap<Term, BTreeSet<Term>>,
    sub_classes: BTreeMap<Term, BTreeSet<Term>>,
    super_properties: BTreeMap<Term, BTreeSet<Term>>,
    inverses: BTreeMap<Term, BTreeSet<Term>>,
}

impl SchemaIndex {
    /// Strict superclasses of `class` (transitive).
    pub fn super_classes(&self, class: &Term) -> impl Iterator<Item = &Term> + '_ {
        self.super_classes.get(class).into_iter().flatten()
    }

    /// Strict subclasses of `class` (transitive).
    pub fn sub_classes(&self, class: &Term) -> impl Iterator<Item = &Term> + '_ {
        self.sub_classes.get(class).into_iter().flatten()
    }

    /// Reflexive-transitive subclass test.
    pub fn is_subclass(&self, sub: &Term, sup: &Term) -> bool {
        sub == sup || self.super_classes.get(sub).is_some_and(|s| s.contains(sup))
    }

    /// Strict superproperties of `property` (transitive; excludes the property
    /// itself even when it lies on a cycle).
    pub fn super_properties(&self, property: &Term) -> impl Iterator<Item = &Term> + '_ {
        self.super_properties.get(property).into_iter().flatten()
    }

    pub fn is_subproperty(&self, sub: &Term, sup: &Term) -> bool {
        sub == sup || self.super_properties.get(sub).is_some_and(|s| s.contains(sup))
    }

    /// Declared inverses of `property`, in either direction of `owl:inverseOf`.
    pub fn inverses(&self, property: &Term) -> impl Iterator<Item = &Term> + '_ {
        self.inverses.get(property).into_iter().flatten()
    }

    pub fn domains(&self, property: &Term) -> impl Iterator<Item = &Term> + '_ {
        self.domain_of.get(property).into_iter().flatten()
    }

    pub fn ranges(&self, property: &Term) -> impl Iterator<Item = &Term> + '_ {
        self.range_of.get(property).into_iter().flatten()
    }

    /// Obligations that bind instances of `class`, including inherited ones.
    pub fn obligations_for<'a>(&'a self, class: &'a Term) -> impl Iterator<Item = &'a Obligation> + 'a {
        self.existential_obligations
            .iter()
            .filter(move |o| self.is_subclass(class, &o.class))
    }
}

fn is_class_declaration(t: &Term) -> bool {
    *t == vocab::owl_class() || *t == vocab::rdfs_class()
}

fn is_property_declaration(t: &Term) -> bool {
    *t == vocab::object_property()
        || *t == vocab::datatype_property()
        || *t == vocab::annotation_property()
        || *t == vocab::rdf_property()
}

/// Pulls every schema axiom out of `graph`. Restrictions are read from the
/// standard OWL encoding: `C rdfs:subClassOf _:r . _:r a owl:Restriction ;
/// owl:onProperty p ; owl:someValuesFrom D .`
pub fn extract_schema(graph: &Graph) -> Result<SchemaIndex, SchemaError> {
    let mut ix = SchemaIndex::default();
    let rdf_type = vocab::rdf_type();
    let sub_class_of = vocab::sub_class_of();

    for t in graph.match_pattern(None, Some(&rdf_type), None) {
        if is_class_declaration(&t.object) && t.subject.is_iri() {
            ix.declared_classes.insert(t.subject.clone());
        } else if is_property_declaration(&t.object) && t.subject.is_iri() {
            ix.declared_properties.insert(t.subject.clone());
        }
        if t.object.is_iri() && !vocab::is_builtin(&t.object) {
            ix.classes.insert(t.object.clone());
        }
    }
    ix.classes.extend(ix.declared_classes.iter().cloned());
    ix.properties.extend(ix.declared_properties.iter().cloned());
    ix.properties.extend(graph.predicates().filter(|p| !vocab::is_builtin(p)).cloned());

    let restriction = vocab::restriction();
    for (sub, sup) in graph.pairs(&sub_class_of) {
        if !sub.is_iri() {
            continue;
        }
        if sup.is_iri() {
            ix.classes.insert(sub.clone());
            ix.classes.insert(sup.clone());
            if sub != sup {
                ix.sub_class_of.insert((sub.clone(), sup.clone()));
            }
        } else if sup.is_blank() && graph.contains_terms(sup, &rdf_type, &restriction) {
            let props: Vec<&Term> = graph.objects(sup, &vocab::on_property()).collect();
            let fillers: Vec<&Term> = graph.objects(sup, &vocab::some_values_from()).collect();
            match (props.as_slice(), fillers.as_slice()) {
                ([p], [d]) if p.is_iri() && d.is_iri() => {
                    ix.classes.insert(sub.clone());
                    ix.existential_obligations.push(Obligation {
                        class: sub.clone(),
                        property: (*p).clone(),
                        filler: (*d).clone(),
                    });
                }
                // Other restriction kinds (allValuesFrom, cardinality) are not indexed.
                ([_], []) => {}
                _ => return Err(SchemaError::MalformedRestriction(sup.to_string())),
            }
        }
    }

    for (p, q) in graph.pairs(&vocab::sub_property_of()) {
        if p.is_iri() && q.is_iri() {
            ix.properties.insert(p.clone());
            ix.properties.insert(q.clone());
            if p != q {
                ix.sub_property_of.insert((p.clone(), q.clone()));
            }
        }
    }
    for (p, d) in graph.pairs(&vocab::domain()) {
        if p.is_iri() && d.is_iri() {
            ix.properties.insert(p.clone());
            ix.classes.insert(d.clone());
            ix.domain_of.entry(p.clone()).or_default().insert(d.clone());
        }
    }
    for (p, r) in graph.pairs(&vocab::range()) {
        if p.is_iri() && r.is_iri() {
            ix.properties.insert(p.clone());
            ix.range_of.entry(p.clone()).or_default().insert(r.clone());
            if !vocab::is_builtin(r) {
                ix.classes.insert(r.clone());
            }
        }
    }
    for (p, q) in graph.pairs(&vocab::inverse_of()) {
        if p.is_iri() && q.is_iri() {
            ix.properties.insert(p.clone());
            ix.properties.insert(q.clone());
            ix.inverse_of.insert((p.clone(), q.clone()));
            ix.inverses.entry(p.clone()).or_default().insert(q.clone());
            ix.inverses.entry(q.clone()).or_default().insert(p.clone());
        }
    }

    let mut disjoint_pairs = BTreeSet::new();
    for (a, b) in graph.pairs(&vocab::disjoint_with()) {
        if a.is_iri() && b.is_iri() && a != b {
            ix.classes.insert(a.clone());
            ix.classes.insert(b.clone());
            disjoint_pairs.insert((a.clone().min(b.clone()), a.clone().max(b.clone())));
        }
    }
    ix.disjoint_sets = maximal_cliques(&disjoint_pairs);

    ix.classes.remove(&vocab::owl_thing());
    ix.existential_obligations.sort();
    ix.existential_obligations.dedup();

    for o in &ix.existential_obligations {
        if !ix.declared_properties.contains(&o.property) {
            return Err(SchemaError::UndeclaredEntity {
                class: o.class.value().to_string(),
                what: "property",
                entity: o.property.value().to_string(),
            });
        }
        if !ix.declared_classes.contains(&o.filler) {
            return Err(SchemaError::UndeclaredEntity {
                class: o.class.value().to_string(),
                what: "class",
                entity: o.filler.value().to_string(),
            });
        }
    }

    check_acyclic(&ix.sub_class_of)?;
    ix.super_classes = transitive_closure(&ix.sub_class_of);
    for (sub, sups) in &ix.super_classes {
        for sup in sups {
            ix.sub_classes.entry(sup.clone()).or_default().insert(sub.clone());
        }
    }
    ix.super_properties = transitive_closure(&ix.sub_property_of);
    for (p, sups) in ix.super_properties.iter_mut() {
        sups.remove(p);
    }

    ix.class_level_triples = graph
        .iter()
        .filter(|t| ix.classes.contains(&t.subject) && !vocab::is_builtin(&t.predicate))
        .collect();

    Ok(ix)
}

fn transitive_closure(edges: &BTreeSet<(Term, Term)>) -> BTreeMap<Term, BTreeSet<Term>> {
    let mut direct: BTreeMap<&Term, Vec<&Term>> = BTreeMap::new();
    for (a, b) in edges {
        direct.entry(a).or_default().push(b);
    }
    let mut closure = BTreeMap::new();
    for start in direct.keys() {
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        let mut stack: Vec<&Term> = direct[start].clone();
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                if let Some(next) = direct.get(n) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        closure.insert((*start).clone(), seen);
    }
    closure
}

fn check_acyclic(edges: &BTreeSet<(Term, Term)>) -> Result<(), SchemaError> {
    let mut adj: BTreeMap<&Term, Vec<&Term>> = BTreeMap::new();
    for (a, b) in edges {
        adj.entry(a).or_default().push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&Term, u8> = BTreeMap::new();
    for &root in adj.keys() {
        if state.get(root).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut path: Vec<&Term> = vec![root];
        let mut iters: Vec<usize> = vec![0];
        state.insert(root, 1);
        while let Some(&node) = path.last() {
            let i = iters.last_mut().expect("parallel stacks");
            let next = adj.get(node).and_then(|v| v.get(*i)).copied();
            *i += 1;
            match next {
                None => {
                    state.insert(node, 2);
                    path.pop();
                    iters.pop();
                }
                Some(n) => match state.get(n).copied().unwrap_or(0) {
                    0 => {
                        state.insert(n, 1);
                        path.push(n);
                        iters.push(0);
                    }
                    1 => {
                        let start = path.iter().position(|p| *p == n).expect("on stack");
                        let mut cycle: Vec<String> = path[start..].iter().map(|t| t.value().to_string()).collect();
                        cycle.push(n.value().to_string());
                        return Err(SchemaError::SubclassCycle(cycle));
                    }
                    _ => {}
                },
            }
        }
    }
    Ok(())
}

/// Bron–Kerbosch over the disjointness graph; singletons never appear.
fn maximal_cliques(pairs: &BTreeSet<(Term, Term)>) -> Vec<BTreeSet<Term>> {
    let mut adj: BTreeMap<Term, BTreeSet<Term>> = BTreeMap::new();
    for (a, b) in pairs {
        adj.entry(a.clone()).or_default().insert(b.clone());
        adj.entry(b.clone()).or_default().insert(a.clone());
    }
    let mut out = Vec::new();
    let candidates: BTreeSet<Term> = adj.keys().cloned().collect();
    bron_kerbosch(&adj, BTreeSet::new(), candidates, BTreeSet::new(), &mut out);
    out.sort();
    out
}

fn bron_kerbosch(
    adj: &BTreeMap<Term, BTreeSet<Term>>,
    r: BTreeSet<Term>,
    mut p: BTreeSet<Term>,
    mut x: BTreeSet<Term>,
    out: &mut Vec<BTreeSet<Term>>,
) {
    if p.is_empty() && x.is_empty() {
        if r.len() >= 2 {
            out.push(r);
        }
        return;
    }
    for v in p.clone() {
        let nv = &adj[&v];
        let mut r2 = r.clone();
        r2.insert(v.clone());
        let p2 = p.intersection(nv).cloned().collect();
        let x2 = x.intersection(nv).cloned().collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.remove(&v);
        x.insert(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefix::PrefixMap;
    use crate::turtle::parse_turtle;

    const HEADER: &str = "@prefix ex: <http://e/> .\n@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n@prefix owl: <http://www.w3.org/2002/07/owl#> .\n";

    fn schema(body: &str) -> Result<SchemaIndex, SchemaError> {
        let g = parse_turtle(&format!("{HEADER}{body}"), &PrefixMap::new()).unwrap().graph;
        extract_schema(&g)
    }

    fn ex(s: &str) -> Term {
        Term::iri(format!("http://e/{s}")).unwrap()
    }

    #[test]
    fn single_subclass_pair() {
        let ix = schema("ex:A rdfs:subClassOf ex:B .").unwrap();
        assert_eq!(ix.sub_class_of, BTreeSet::from([(ex("A"), ex("B"))]));
        assert!(ix.sub_property_of.is_empty());
        assert!(ix.existential_obligations.is_empty());
        assert!(ix.disjoint_sets.is_empty());
        assert!(ix.domain_of.is_empty() && ix.range_of.is_empty() && ix.inverse_of.is_empty());
    }

    #[test]
    fn cycle_is_reported_with_path() {
        let err = schema("ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C . ex:C rdfs:subClassOf ex:A .").unwrap_err();
        match err {
            SchemaError::SubclassCycle(path) => {
                assert_eq!(path.first(), path.last());
                assert_eq!(path.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(schema("ex:A rdfs:subClassOf ex:A .").unwrap().sub_class_of.is_empty());
    }

    #[test]
    fn closures() {
        let ix = schema(
            "ex:A rdfs:subClassOf ex:B . ex:B rdfs:subClassOf ex:C .
             ex:p rdfs:subPropertyOf ex:q . ex:q rdfs:subPropertyOf ex:p . ex:q rdfs:subPropertyOf ex:r .
             ex:p owl:inverseOf ex:pi .",
        )
        .unwrap();
        assert!(ix.is_subclass(&ex("A"), &ex("C")));
        assert!(!ix.is_subclass(&ex("C"), &ex("A")));
        assert_eq!(ix.sub_classes(&ex("C")).count(), 2);
        let supers: Vec<_> = ix.super_properties(&ex("p")).cloned().collect();
        assert_eq!(supers, vec![ex("q"), ex("r")]);
        assert_eq!(ix.inverses(&ex("pi")).cloned().collect::<Vec<_>>(), vec![ex("p")]);
    }

    #[test]
    fn pairwise_disjointness_forms_one_set() {
        let ix = schema(
            "ex:C owl:disjointWith ex:D . ex:C owl:disjointWith ex:V . ex:D owl:disjointWith ex:V .
             ex:X owl:disjointWith ex:Y .",
        )
        .unwrap();
        assert_eq!(
            ix.disjoint_sets,
            vec![
                BTreeSet::from([ex("C"), ex("D"), ex("V")]),
                BTreeSet::from([ex("X"), ex("Y")])
            ]
        );
    }

    #[test]
    fn restrictions_become_obligations() {
        let ix = schema(
            "ex:p a owl:ObjectProperty . ex:D a owl:Class . ex:C a owl:Class ;
                rdfs:subClassOf _:r . _:r a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:D .",
        )
        .unwrap();
        assert_eq!(
            ix.existential_obligations,
            vec![Obligation {
                class: ex("C"),
                property: ex("p"),
                filler: ex("D")
            }]
        );
        assert!(ix.sub_class_of.is_empty());
    }

    #[test]
    fn undeclared_obligation_entity_is_an_error() {
        let err = schema(
            "ex:D a owl:Class . ex:C rdfs:subClassOf _:r . _:r a owl:Restriction ; owl:onProperty ex:p ; owl:someValuesFrom ex:D .",
        )
        .unwrap_err();
        assert!(matches!(err, SchemaError::UndeclaredEntity { what: "property", .. }));
    }

    #[test]
    fn class_level_triples_are_routed() {
        let ix = schema("ex:Bio a owl:Class ; ex:applies ex:Feminism ; rdfs:label \"x\" . ex:i ex:applies ex:Feminism .").unwrap();
        assert_eq!(ix.class_level_triples.len(), 1);
        assert_eq!(ix.class_level_triples[0].subject, ex("Bio"));
    }
}
