//! Loads documents into one graph and runs the reasoning steps over it.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::Graph;
use crate::materialize::{materialize, EntailmentRegime};
use crate::ontology::{extract_schema, AssetTexts, NameResolver, SchemaError, SchemaIndex, Vocabulary};
use crate::ontology::{SCENARIO_FILE, TAXONOMY_FILE};
use crate::prefix::{vocab, PrefixMap};
use crate::query::{Query, QueryError, QueryMode, ResultSet};
use crate::rules::{collect_verdicts, evaluate_rules, Rule, RuleError, Verdict};
use crate::term::{Term, Triple};
use crate::turtle::{parse_turtle, ParseDiagnostic};
use crate::validate::{
    check_disjointness, check_obligations_for, DocumentRole, InputDigest, ValidationReport, World,
};

/// A named Turtle text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDoc {
    pub name: String,
    pub text: String,
}

impl SourceDoc {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> SourceDoc {
        SourceDoc {
            name: name.into(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{source_name}:{diagnostic}")]
    Parse {
        source_name: String,
        diagnostic: ParseDiagnostic,
    },
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// Everything derived from a set of input documents.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub asserted: Graph,
    pub schema: SchemaIndex,
    pub materialized: Graph,
    pub prefixes: PrefixMap,
    pub inputs: Vec<InputDigest>,
    /// Subjects of data documents: the individuals closed-world audits cover.
    pub audited: BTreeSet<Term>,
    /// Non-fatal parser diagnostics, with the document they came from.
    pub warnings: Vec<(String, ParseDiagnostic)>,
}

impl KnowledgeBase {
    /// Parses and merges `docs` in order. Blank node labels that collide
    /// with labels of earlier documents are renamed.
    pub fn build(docs: &[SourceDoc]) -> Result<KnowledgeBase, PipelineError> {
        let mut asserted = Graph::new();
        let mut prefixes = PrefixMap::apple_default();
        let mut inputs = Vec::new();
        let mut audited = BTreeSet::new();
        let mut warnings = Vec::new();
        let mut labels: BTreeSet<String> = BTreeSet::new();

        for doc in docs {
            let parsed = parse_turtle(&doc.text, &PrefixMap::apple_default()).map_err(|diagnostic| {
                PipelineError::Parse {
                    source_name: doc.name.clone(),
                    diagnostic,
                }
            })?;
            for (p, ns) in parsed.prefixes.iter() {
                prefixes.insert(p, ns);
            }
            warnings.extend(parsed.warnings.into_iter().map(|w| (doc.name.clone(), w)));
            let graph = relabel(&parsed.graph, &mut labels);
            let role = document_role(&graph);
            if role == DocumentRole::Data {
                audited.extend(graph.iter().map(|t| t.subject));
            }
            inputs.push(InputDigest {
                name: doc.name.clone(),
                sha256: hex::encode(Sha256::digest(doc.text.as_bytes())),
                triples: graph.len(),
                role,
            });
            for t in graph.iter() {
                asserted.insert_unchecked(t);
            }
        }

        let schema = extract_schema(&asserted)?;
        let materialized = materialize(&asserted, &schema, &EntailmentRegime::default());
        Ok(KnowledgeBase {
            asserted,
            schema,
            materialized,
            prefixes,
            inputs,
            audited,
            warnings,
        })
    }

    /// Taxonomy followed by scenario.
    pub fn from_assets(texts: &AssetTexts) -> Result<KnowledgeBase, PipelineError> {
        KnowledgeBase::build(&[
            SourceDoc::new(TAXONOMY_FILE, texts.taxonomy.clone()),
            SourceDoc::new(SCENARIO_FILE, texts.scenario.clone()),
        ])
    }

    pub fn bundled() -> Result<KnowledgeBase, PipelineError> {
        KnowledgeBase::from_assets(&AssetTexts::bundled())
    }

    /// Closed when some input is a data document, open otherwise.
    pub fn default_world(&self) -> World {
        if self.inputs.iter().any(|i| i.role == DocumentRole::Data) {
            World::Closed
        } else {
            World::Open
        }
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary::from_graph(&self.materialized, &self.schema)
    }

    /// A resolver that knows the loaded prefixes and rejects unknown names.
    pub fn names(&self) -> NameResolver {
        NameResolver {
            prefixes: self.prefixes.clone(),
            ..NameResolver::with_vocabulary(self.vocabulary())
        }
    }

    pub fn validate(&self, world: World) -> ValidationReport {
        let mut violations = check_disjointness(&self.materialized, &self.schema);
        violations.extend(check_obligations_for(
            &self.materialized,
            &self.schema,
            world,
            Some(&self.audited),
        ));
        ValidationReport::new(world, self.inputs.clone(), violations)
    }

    /// The materialized graph with `rules` applied, materialized once more
    /// so rule conclusions inherit their superclasses.
    pub fn reasoned(&self, rules: &[Rule]) -> Graph {
        if rules.is_empty() {
            return self.materialized.clone();
        }
        let with_rules = evaluate_rules(&self.materialized, rules);
        materialize(&with_rules, &self.schema, &EntailmentRegime::default())
    }

    pub fn classify(&self, rules: &[Rule]) -> Result<Vec<Verdict>, RuleError> {
        let evaluated = evaluate_rules(&self.materialized, rules);
        collect_verdicts(&self.materialized, &evaluated, rules)
    }

    pub fn query(&self, mode: QueryMode, text: &str) -> Result<ResultSet, QueryError> {
        self.query_over(&self.materialized, mode, text)
    }

    pub fn query_over(&self, graph: &Graph, mode: QueryMode, text: &str) -> Result<ResultSet, QueryError> {
        let q = Query::parse(mode, text, &self.names())?;
        Ok(q.run(graph, &self.schema))
    }
}

/// A document is data when it declares no classes or properties and states
/// no schema axioms.
pub fn document_role(graph: &Graph) -> DocumentRole {
    let schema_predicates = [
        vocab::sub_class_of(),
        vocab::sub_property_of(),
        vocab::domain(),
        vocab::range(),
        vocab::inverse_of(),
        vocab::disjoint_with(),
    ];
    let declarations = [
        vocab::owl_class(),
        vocab::rdfs_class(),
        vocab::object_property(),
        vocab::datatype_property(),
        vocab::annotation_property(),
        vocab::rdf_property(),
        vocab::restriction(),
    ];
    let rdf_type = vocab::rdf_type();
    let is_schema = graph.iter().any(|t| {
        schema_predicates.contains(&t.predicate) || (t.predicate == rdf_type && declarations.contains(&t.object))
    });
    if is_schema {
        DocumentRole::Schema
    } else {
        DocumentRole::Data
    }
}

fn relabel(graph: &Graph, taken: &mut BTreeSet<String>) -> Graph {
    let mut renames: BTreeMap<String, String> = BTreeMap::new();
    let own: BTreeSet<String> = graph
        .nodes()
        .into_iter()
        .filter_map(|n| match n {
            Term::Blank(l) => Some(l.to_string()),
            _ => None,
        })
        .collect();
    for label in &own {
        let mut fresh = label.clone();
        let mut n = 1;
        while taken.contains(&fresh) || (fresh != *label && own.contains(&fresh)) {
            n += 1;
            fresh = format!("{label}_{n}");
        }
        taken.insert(fresh.clone());
        renames.insert(label.clone(), fresh);
    }
    if renames.iter().all(|(a, b)| a == b) {
        return graph.clone();
    }
    let map = |t: Term| match &t {
        Term::Blank(l) => Term::Blank(renames[l.as_ref()].as_str().into()),
        _ => t,
    };
    graph
        .iter()
        .map(|t| Triple {
            subject: map(t.subject),
            predicate: t.predicate,
            object: map(t.object),
        })
        .collect()
}
