use std::fmt::Write as _;

use crate::graph::Graph;
use crate::prefix::{vocab, PrefixMap};
use crate::term::{escape_string, LiteralKind, Term};

/// Writes `graph` as Turtle: every binding of `prefixes` as a header, then one
/// block per subject in sorted order with `a` first and objects comma-joined.
pub fn serialize_turtle(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (prefix, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }
    let rdf_type = vocab::rdf_type();
    let triples: Vec<_> = graph.iter().collect();
    let mut i = 0;
    while i < triples.len() {
        let subject = &triples[i].subject;
        let mut j = i;
        while j < triples.len() && &triples[j].subject == subject {
            j += 1;
        }
        let block = &triples[i..j];
        out.push('\n');
        out.push_str(&write_term(subject, prefixes));

        // (predicate, objects) groups, rdf:type first
        let mut groups: Vec<(&Term, Vec<&Term>)> = Vec::new();
        for t in block {
            match groups.last_mut() {
                Some((p, objs)) if *p == &t.predicate => objs.push(&t.object),
                _ => groups.push((&t.predicate, vec![&t.object])),
            }
        }
        groups.sort_by_key(|(p, _)| **p != rdf_type);

        for (n, (predicate, objects)) in groups.iter().enumerate() {
            out.push_str(if n == 0 { " " } else { " ;\n    " });
            if **predicate == rdf_type {
                out.push('a');
            } else {
                out.push_str(&write_term(predicate, prefixes));
            }
            out.push(' ');
            let objs: Vec<String> = objects.iter().map(|o| write_term(o, prefixes)).collect();
            out.push_str(&objs.join(" , "));
        }
        out.push_str(" .\n");
        i = j;
    }
    out
}

fn write_iri(iri: &str, prefixes: &PrefixMap) -> String {
    match prefixes.compact(iri) {
        Some((p, local)) => format!("{p}:{local}"),
        None => format!("<{}>", escape_iri(iri)),
    }
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::with_capacity(iri.len());
    for c in iri.chars() {
        if (c as u32) <= 0x20 || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}

/// One term in Turtle syntax, compacted through `prefixes` where possible.
pub fn write_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(i) => write_iri(i, prefixes),
        Term::Blank(b) => format!("_:{b}"),
        Term::Literal { lexical, kind } => {
            let mut s = format!("\"{}\"", escape_string(lexical));
            match kind {
                LiteralKind::Simple => {}
                LiteralKind::Lang(tag) => {
                    s.push('@');
                    s.push_str(tag);
                }
                LiteralKind::Typed(dt) => {
                    s.push_str("^^");
                    s.push_str(&write_iri(dt, prefixes));
                }
            }
            s
        }
    }
}
