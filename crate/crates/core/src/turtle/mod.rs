//! Turtle reading and writing.
//!
//! Supported: `@prefix`/`@base` (and the SPARQL-style `PREFIX`/`BASE`),
//! prefixed names, absolute and relative IRIs, `a`, `,` and `;` lists,
//! plain/typed/language-tagged strings (short and long quotes), blank node
//! labels and `#` comments. N-Triples is a subset of this.
//!
//! Collections, `[ ... ]` blank node property lists, RDF-star and the
//! numeric/boolean literal shorthands are rejected with a diagnostic that
//! names the construct.

mod parser;
mod writer;

pub use parser::{parse_turtle, ParseDiagnostic, Severity, TurtleDocument};
pub use writer::{serialize_turtle, write_term};
