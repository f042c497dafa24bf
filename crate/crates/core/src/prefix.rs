//! Namespace bindings.

use std::collections::BTreeMap;

use crate::term::Term;

pub const APPLE: &str = "https://purl.org/appliedethicsontology#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

/// Namespaces of the design patterns and ontologies whose terms the ontology reuses.
pub const REUSED_NAMESPACES: [(&str, &str); 12] = [
    ("airo", "https://w3id.org/AIRO#"),
    ("copart", "http://www.ontologydesignpatterns.org/cp/owl/coparticipation.owl#"),
    ("event", "http://w3id.org/daselab/onto/event#"),
    ("ex", "http://contextus.net/ontology/ontomedia/core/expression#"),
    ("foaf", "http://xmlns.com/foaf/0.1/"),
    ("modsci", "https://w3id.org/skgo/modsci#"),
    ("or", "http://www.ontologydesignpatterns.org/cp/owl/objectrole.owl#"),
    ("part", "http://www.ontologydesignpatterns.org/cp/owl/participation.owl#"),
    ("schema", "http://schema.org/"),
    ("time", "http://www.w3.org/2006/time#"),
    ("traffic", "http://www.sensormeasurement.appspot.com/ont/transport/traffic#"),
    ("tj", "http://w3id.org/daselab/onto/trajectory#"),
];

/// Map from prefix label to namespace IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    bindings: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> PrefixMap {
        PrefixMap::default()
    }

    /// The apple namespace, the reused namespaces and the RDF/RDFS/OWL/XSD core.
    pub fn apple_default() -> PrefixMap {
        let mut map = PrefixMap::new();
        map.insert("apple", APPLE);
        for (prefix, ns) in REUSED_NAMESPACES {
            map.insert(prefix, ns);
        }
        map.insert("owl", OWL);
        map.insert("rdf", RDF);
        map.insert("rdfs", RDFS);
        map.insert("xsd", XSD);
        map
    }

    /// Binds `prefix`, returning the namespace it replaced.
    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) -> Option<String> {
        self.bindings.insert(prefix.into(), namespace.into())
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.bindings.get(prefix).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Option<String> {
        self.get(prefix).map(|ns| format!("{ns}{local}"))
    }

    /// Best prefixed name for `iri`: the longest matching namespace whose
    /// remainder is a plain local name. Ties go to the alphabetically first prefix.
    pub fn compact(&self, iri: &str) -> Option<(String, String)> {
        let mut best: Option<(&str, &str)> = None;
        for (prefix, ns) in self.iter() {
            if ns.is_empty() || !iri.starts_with(ns) {
                continue;
            }
            let local = &iri[ns.len()..];
            if !is_simple_local(local) {
                continue;
            }
            if best.is_none_or(|(_, b)| ns.len() > b.len()) {
                best = Some((prefix, ns));
            }
        }
        best.map(|(p, ns)| (p.to_string(), iri[ns.len()..].to_string()))
    }
}

/// Local names the serializer writes unescaped: `[A-Za-z_][A-Za-z0-9_-]*`, or empty.
pub(crate) fn is_simple_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        _ => false,
    }
}

/// Well-known IRIs used throughout the crate.
pub mod vocab {
    use super::*;

    pub fn iri(ns: &str, local: &str) -> Term {
        Term::Iri(format!("{ns}{local}").into())
    }

    pub fn apple(local: &str) -> Term {
        iri(APPLE, local)
    }

    pub fn rdf_type() -> Term {
        iri(RDF, "type")
    }
    pub fn rdf_property() -> Term {
        iri(RDF, "Property")
    }
    pub fn sub_class_of() -> Term {
        iri(RDFS, "subClassOf")
    }
    pub fn sub_property_of() -> Term {
        iri(RDFS, "subPropertyOf")
    }
    pub fn domain() -> Term {
        iri(RDFS, "domain")
    }
    pub fn range() -> Term {
        iri(RDFS, "range")
    }
    pub fn rdfs_class() -> Term {
        iri(RDFS, "Class")
    }
    pub fn owl_class() -> Term {
        iri(OWL, "Class")
    }
    pub fn owl_thing() -> Term {
        iri(OWL, "Thing")
    }
    pub fn object_property() -> Term {
        iri(OWL, "ObjectProperty")
    }
    pub fn datatype_property() -> Term {
        iri(OWL, "DatatypeProperty")
    }
    pub fn annotation_property() -> Term {
        iri(OWL, "AnnotationProperty")
    }
    pub fn named_individual() -> Term {
        iri(OWL, "NamedIndividual")
    }
    pub fn inverse_of() -> Term {
        iri(OWL, "inverseOf")
    }
    pub fn disjoint_with() -> Term {
        iri(OWL, "disjointWith")
    }
    pub fn restriction() -> Term {
        iri(OWL, "Restriction")
    }
    pub fn on_property() -> Term {
        iri(OWL, "onProperty")
    }
    pub fn some_values_from() -> Term {
        iri(OWL, "someValuesFrom")
    }

    /// True for IRIs in the RDF, RDFS, OWL or XSD namespaces.
    pub fn is_builtin(term: &Term) -> bool {
        term.as_iri()
            .is_some_and(|i| [RDF, RDFS, OWL, XSD].iter().any(|ns| i.starts_with(ns)))
    }
}
