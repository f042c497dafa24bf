//! RDF terms and triples.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI `{0}` is not absolute")]
    RelativeIri(String),
    #[error("blank node label must not be empty")]
    EmptyBlankLabel,
    #[error("language tag must not be empty")]
    EmptyLangTag,
    #[error("triple subject must be an IRI or blank node, found literal {0}")]
    LiteralSubject(String),
    #[error("triple predicate must be an IRI, found {0}")]
    NonIriPredicate(String),
}

/// Annotation on a literal: either a datatype IRI or a language tag, never both.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiteralKind {
    Simple,
    Typed(Arc<str>),
    Lang(Arc<str>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Arc<str>),
    Blank(Arc<str>),
    Literal { lexical: Arc<str>, kind: LiteralKind },
}

impl Term {
    /// An IRI term. The value must carry a scheme separator.
    pub fn iri(value: impl AsRef<str>) -> Result<Term, TermError> {
        let value = value.as_ref();
        if !is_absolute_iri(value) {
            return Err(TermError::RelativeIri(value.to_string()));
        }
        Ok(Term::Iri(Arc::from(value)))
    }

    pub fn blank(label: impl AsRef<str>) -> Result<Term, TermError> {
        let label = label.as_ref();
        if label.is_empty() {
            return Err(TermError::EmptyBlankLabel);
        }
        Ok(Term::Blank(Arc::from(label)))
    }

    pub fn literal(lexical: impl AsRef<str>) -> Term {
        Term::Literal {
            lexical: Arc::from(lexical.as_ref()),
            kind: LiteralKind::Simple,
        }
    }

    pub fn typed_literal(lexical: impl AsRef<str>, datatype: impl AsRef<str>) -> Result<Term, TermError> {
        let datatype = datatype.as_ref();
        if !is_absolute_iri(datatype) {
            return Err(TermError::RelativeIri(datatype.to_string()));
        }
        Ok(Term::Literal {
            lexical: Arc::from(lexical.as_ref()),
            kind: LiteralKind::Typed(Arc::from(datatype)),
        })
    }

    pub fn lang_literal(lexical: impl AsRef<str>, lang: impl AsRef<str>) -> Result<Term, TermError> {
        let lang = lang.as_ref();
        if lang.is_empty() {
            return Err(TermError::EmptyLangTag);
        }
        Ok(Term::Literal {
            lexical: Arc::from(lexical.as_ref()),
            kind: LiteralKind::Lang(Arc::from(lang)),
        })
    }

    /// IRI text, blank label or literal lexical form.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri(v) | Term::Blank(v) => v,
            Term::Literal { lexical, .. } => lexical,
        }
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    fn rank(&self) -> u8 {
        match self {
            Term::Iri(_) => 0,
            Term::Blank(_) => 1,
            Term::Literal { .. } => 2,
        }
    }
}

pub(crate) fn is_absolute_iri(value: &str) -> bool {
    match value.find(':') {
        Some(idx) if idx > 0 => {
            let scheme = &value[..idx];
            scheme.starts_with(|c: char| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
                && !value.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
        }
        _ => false,
    }
}

// Lexicographic by value first so that result listings read alphabetically;
// the kind and literal annotation only break ties.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value()
            .cmp(other.value())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| match (self, other) {
                (Term::Literal { kind: a, .. }, Term::Literal { kind: b, .. }) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(v) => write!(f, "<{v}>"),
            Term::Blank(v) => write!(f, "_:{v}"),
            Term::Literal { lexical, kind } => {
                write!(f, "\"{}\"", escape_string(lexical))?;
                match kind {
                    LiteralKind::Simple => Ok(()),
                    LiteralKind::Typed(dt) => write!(f, "^^<{dt}>"),
                    LiteralKind::Lang(tag) => write!(f, "@{tag}"),
                }
            }
        }
    }
}

impl Term {
    /// The IRI itself for IRIs, N-Triples syntax for anything else. Used in
    /// JSON and TSV output, where IRIs are written bare.
    pub fn plain(&self) -> String {
        match self {
            Term::Iri(v) => v.to_string(),
            other => other.to_string(),
        }
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.plain())
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, TermError> {
        let triple = Triple {
            subject,
            predicate,
            object,
        };
        triple.check()?;
        Ok(triple)
    }

    pub fn check(&self) -> Result<(), TermError> {
        if self.subject.is_literal() {
            return Err(TermError::LiteralSubject(self.subject.to_string()));
        }
        if !self.predicate.is_iri() {
            return Err(TermError::NonIriPredicate(self.predicate.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
