//! Rule evaluation with stratified negation-as-failure.
//!
//! Rules are a SWRL subset: unary class atoms and binary property atoms over
//! variables and constants, with `not` allowed on body atoms whose variables
//! are bound elsewhere in the body. Negation is evaluated against strictly
//! lower strata, which makes every rule set that parses have a unique result.

mod eval;
mod parser;
mod verdict;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::prefix::vocab;
use crate::term::Term;

pub use eval::{evaluate_rules, match_body, Bindings};
pub use parser::parse_rules;
pub use verdict::{classify_actions, collect_verdicts, firings_for, replay, Firing, Intention, Verdict, VerdictClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("rule {rule}: {message}")]
    Invalid { rule: String, message: String },
    #[error("rule {rule}: unknown {kind} `{name}`")]
    UnknownName {
        rule: String,
        kind: &'static str,
        name: String,
    },
    #[error("rule {rule}: rule set is not stratifiable (negation through recursion)")]
    Unstratifiable { rule: String },
    #[error("action {action} holds conflicting verdicts: {}", .classes.join(", "))]
    ConflictingVerdicts { action: String, classes: Vec<String> },
}

impl RuleError {
    /// The rule the error is about, when there is one.
    pub fn rule_id(&self) -> Option<&str> {
        match self {
            RuleError::Invalid { rule, .. }
            | RuleError::UnknownName { rule, .. }
            | RuleError::Unstratifiable { rule } => Some(rule),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomTerm {
    Var(String),
    Const(Term),
    /// `_` in a negated atom: "anything".
    Wildcard,
}

impl AtomTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            AtomTerm::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for AtomTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomTerm::Var(v) => write!(f, "?{v}"),
            AtomTerm::Const(t) => write!(f, "{t}"),
            AtomTerm::Wildcard => write!(f, "_"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    Class { class: Term, arg: AtomTerm },
    Property { property: Term, subject: AtomTerm, object: AtomTerm },
}

/// What an atom reads or writes, for stratification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    Class(Term),
    Property(Term),
}

impl Atom {
    pub fn predicate(&self) -> Predicate {
        match self {
            Atom::Class { class, .. } => Predicate::Class(class.clone()),
            Atom::Property { property, .. } => Predicate::Property(property.clone()),
        }
    }

    /// (subject, predicate, object) with the predicate fixed.
    pub fn as_pattern(&self) -> (&AtomTerm, Term, AtomTerm) {
        match self {
            Atom::Class { class, arg } => (arg, vocab::rdf_type(), AtomTerm::Const(class.clone())),
            Atom::Property {
                property,
                subject,
                object,
            } => (subject, property.clone(), object.clone()),
        }
    }

    pub fn args(&self) -> Vec<&AtomTerm> {
        match self {
            Atom::Class { arg, .. } => vec![arg],
            Atom::Property { subject, object, .. } => vec![subject, object],
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        self.args().into_iter().filter_map(AtomTerm::var).collect()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Class { class, arg } => write!(f, "{class}({arg})"),
            Atom::Property {
                property,
                subject,
                object,
            } => write!(f, "{property}({subject}, {object})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BodyAtom {
    pub atom: Atom,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub body: Vec<BodyAtom>,
    pub head: Vec<Atom>,
    pub stratum: usize,
}

impl Rule {
    pub fn positive_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|b| !b.negated).map(|b| &b.atom)
    }

    pub fn negative_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter(|b| b.negated).map(|b| &b.atom)
    }
}

/// Number of distinct strata used by `rules`.
pub fn stratum_count(rules: &[Rule]) -> usize {
    rules.iter().map(|r| r.stratum).collect::<BTreeSet<_>>().len()
}
