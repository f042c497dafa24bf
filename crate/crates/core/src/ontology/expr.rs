use std::collections::BTreeSet;
use std::fmt;

use crate::term::Term;

/// A property, optionally traversed backwards (`inverse p`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropertyPath {
    pub property: Term,
    pub inverted: bool,
}

impl PropertyPath {
    pub fn forward(property: Term) -> PropertyPath {
        PropertyPath {
            property,
            inverted: false,
        }
    }

    pub fn inverse(property: Term) -> PropertyPath {
        PropertyPath {
            property,
            inverted: true,
        }
    }
}

/// Query-side class expressions.
///
/// `Some` with an `Anything` filler is the unqualified `(p some)` form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassExpression {
    Named(Term),
    And(Vec<ClassExpression>),
    Some {
        path: PropertyPath,
        filler: Box<ClassExpression>,
    },
    OneOf(BTreeSet<Term>),
    Anything,
}

impl ClassExpression {
    /// Builds a conjunction, flattening nested `And`s. A single conjunct is
    /// returned as is; an empty list is `Anything`.
    pub fn and(parts: Vec<ClassExpression>) -> ClassExpression {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                ClassExpression::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => ClassExpression::Anything,
            1 => flat.pop().expect("one element"),
            _ => ClassExpression::And(flat),
        }
    }

    pub fn some(path: PropertyPath, filler: ClassExpression) -> ClassExpression {
        ClassExpression::Some {
            path,
            filler: Box::new(filler),
        }
    }

    /// `None` for an empty set.
    pub fn one_of<I: IntoIterator<Item = Term>>(items: I) -> Option<ClassExpression> {
        let set: BTreeSet<Term> = items.into_iter().collect();
        (!set.is_empty()).then_some(ClassExpression::OneOf(set))
    }

    /// Top-level conjuncts (a non-conjunction is its own single conjunct).
    pub fn conjuncts(&self) -> &[ClassExpression] {
        match self {
            ClassExpression::And(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    /// True when every `And` has at least two conjuncts and every `OneOf` is nonempty.
    pub fn is_well_formed(&self) -> bool {
        match self {
            ClassExpression::And(parts) => parts.len() >= 2 && parts.iter().all(|p| p.is_well_formed()),
            ClassExpression::Some { filler, .. } => filler.is_well_formed(),
            ClassExpression::OneOf(set) => !set.is_empty(),
            ClassExpression::Named(_) | ClassExpression::Anything => true,
        }
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpression::Named(t) => write!(f, "{t}"),
            ClassExpression::Anything => write!(f, "owl:Thing"),
            ClassExpression::OneOf(set) => {
                let items: Vec<String> = set.iter().map(|t| t.to_string()).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
            ClassExpression::And(parts) => {
                let items: Vec<String> = parts
                    .iter()
                    .map(|p| match p {
                        ClassExpression::Some { .. } | ClassExpression::And(_) => format!("({p})"),
                        _ => p.to_string(),
                    })
                    .collect();
                write!(f, "{}", items.join(" and "))
            }
            ClassExpression::Some { path, filler } => {
                if path.inverted {
                    write!(f, "inverse ")?;
                }
                write!(f, "{} some", path.property)?;
                match filler.as_ref() {
                    ClassExpression::Anything => Ok(()),
                    ClassExpression::Named(_) | ClassExpression::OneOf(_) => write!(f, " {filler}"),
                    other => write!(f, " ({other})"),
                }
            }
        }
    }
}
