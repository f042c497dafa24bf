//! Applied-ethics ontology toolkit: an in-memory triple store, a
//! Turtle subset, schema materialization, stratified verdict rules,
//! class-expression queries and consistency checks, with the ontology,
//! a bioethics scenario and its competency questions bundled.

pub mod cq;
pub mod graph;
pub mod materialize;
pub mod ontology;
pub mod pipeline;
pub mod prefix;
pub mod query;
pub mod rules;
pub mod term;
pub mod turtle;
pub mod validate;

pub use graph::Graph;
pub use pipeline::{KnowledgeBase, PipelineError, SourceDoc};
pub use prefix::PrefixMap;
pub use term::{Term, TermError, Triple};
