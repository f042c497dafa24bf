use std::collections::BTreeSet;

use crate::graph::Graph;
use crate::ontology::SchemaIndex;
use crate::prefix::{vocab, PrefixMap, APPLE, OWL};
use crate::term::{is_absolute_iri, Term};

/// Alternative spellings accepted in queries and rule files, mapped to the
/// canonical local name in the apple namespace.
pub const ALIASES: [(&str, &str); 3] = [
    ("upholdsEthicalPrinciples", "upholdsEthicalPrinciple"),
    ("violatesEthicalPrinciples", "violatesEthicalPrinciple"),
    ("EthicalPrinciples", "EthicalPrinciple"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Class,
    Property,
    Individual,
}

impl NameKind {
    pub fn describe(self) -> &'static str {
        match self {
            NameKind::Class => "class",
            NameKind::Property => "property",
            NameKind::Individual => "individual",
        }
    }
}

/// What names are known to exist. Built from a graph and its schema.
#[derive(Debug, Clone, Default)]
pub struct Vocabulary {
    pub classes: BTreeSet<Term>,
    pub properties: BTreeSet<Term>,
    pub nodes: BTreeSet<Term>,
}

impl Vocabulary {
    pub fn from_graph(graph: &Graph, schema: &SchemaIndex) -> Vocabulary {
        Vocabulary {
            classes: schema.classes.clone(),
            properties: schema.properties.clone(),
            nodes: graph.nodes(),
        }
    }

    pub fn knows(&self, kind: NameKind, term: &Term) -> bool {
        match kind {
            NameKind::Class => self.classes.contains(term) || vocab::is_builtin(term),
            NameKind::Property => self.properties.contains(term) || vocab::is_builtin(term),
            NameKind::Individual => self.nodes.contains(term) || self.classes.contains(term),
        }
    }
}

/// Turns surface names (`Doctor`, `apple:Doctor`, `<http://...>`) into IRIs.
///
/// Bare names live in the default namespace. With a vocabulary attached,
/// names that resolve to unknown entities are rejected.
#[derive(Debug, Clone)]
pub struct NameResolver {
    pub prefixes: PrefixMap,
    pub default_namespace: String,
    pub vocabulary: Option<Vocabulary>,
}

impl Default for NameResolver {
    fn default() -> Self {
        NameResolver {
            prefixes: PrefixMap::apple_default(),
            default_namespace: APPLE.to_string(),
            vocabulary: None,
        }
    }
}

impl NameResolver {
    pub fn with_vocabulary(vocabulary: Vocabulary) -> NameResolver {
        NameResolver {
            vocabulary: Some(vocabulary),
            ..NameResolver::default()
        }
    }

    /// Resolves `name` as the given kind. Errors carry a message fit for a diagnostic.
    pub fn resolve(&self, name: &str, kind: NameKind) -> Result<Term, String> {
        let term = self.expand(name)?;
        if let Some(v) = &self.vocabulary {
            if !v.knows(kind, &term) {
                return Err(format!("unknown {} `{name}`", kind.describe()));
            }
        }
        Ok(term)
    }

    /// Like [`NameResolver::resolve`] but without the vocabulary check.
    pub fn expand(&self, name: &str) -> Result<Term, String> {
        let iri = if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
            if !is_absolute_iri(inner) {
                return Err(format!("bad IRI <{inner}>"));
            }
            inner.to_string()
        } else if let Some((prefix, local)) = name.split_once(':') {
            match self.prefixes.expand(prefix, local) {
                Some(iri) => iri,
                None => return Err(format!("unknown prefix `{prefix}:`")),
            }
        } else {
            format!("{}{}", self.default_namespace, name)
        };
        Term::iri(canonical(&iri)).map_err(|e| e.to_string())
    }

    /// `Thing` and `owl:Thing` denote the universal class.
    pub fn is_thing(&self, name: &str) -> bool {
        name == "Thing" || name == "owl:Thing" || name == format!("<{OWL}Thing>")
    }
}

/// Applies the alias table to an expanded IRI.
pub fn canonical(iri: &str) -> String {
    if let Some(local) = iri.strip_prefix(APPLE) {
        if let Some((_, canon)) = ALIASES.iter().find(|(alias, _)| *alias == local) {
            return format!("{APPLE}{canon}");
        }
    }
    iri.to_string()
}
