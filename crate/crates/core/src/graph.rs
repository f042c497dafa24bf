//! In-memory triple store with subject-, predicate- and object-first indexes.

use std::collections::{BTreeMap, BTreeSet};

use crate::term::{Term, TermError, Triple};

type Index = BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>;

/// A set of triples kept in three index orders: (s, p, o), (p, o, s) and (o, s, p).
///
/// Every lookup returns triples in (subject, predicate, object) order regardless
/// of which index served it.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    spo: Index,
    pos: Index,
    osp: Index,
    len: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.spo == other.spo
    }
}

impl Eq for Graph {}

fn index_insert(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    index
        .entry(a.clone())
        .or_default()
        .entry(b.clone())
        .or_default()
        .insert(c.clone())
}

fn index_remove(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    let Some(second) = index.get_mut(a) else {
        return false;
    };
    let Some(third) = second.get_mut(b) else {
        return false;
    };
    let removed = third.remove(c);
    if third.is_empty() {
        second.remove(b);
    }
    if second.is_empty() {
        index.remove(a);
    }
    removed
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Adds a triple. Returns `Ok(false)` when it was already present.
    pub fn insert(&mut self, triple: Triple) -> Result<bool, TermError> {
        triple.check()?;
        Ok(self.insert_unchecked(triple))
    }

    pub(crate) fn insert_unchecked(&mut self, triple: Triple) -> bool {
        let Triple {
            subject: s,
            predicate: p,
            object: o,
        } = triple;
        if !index_insert(&mut self.spo, &s, &p, &o) {
            return false;
        }
        index_insert(&mut self.pos, &p, &o, &s);
        index_insert(&mut self.osp, &o, &s, &p);
        self.len += 1;
        true
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (s, p, o) = (&triple.subject, &triple.predicate, &triple.object);
        if !index_remove(&mut self.spo, s, p, o) {
            return false;
        }
        index_remove(&mut self.pos, p, o, s);
        index_remove(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.contains_terms(&triple.subject, &triple.predicate, &triple.object)
    }

    pub fn contains_terms(&self, s: &Term, p: &Term, o: &Term) -> bool {
        self.spo
            .get(s)
            .and_then(|m| m.get(p))
            .is_some_and(|set| set.contains(o))
    }

    /// All triples in (s, p, o) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, pm)| {
            pm.iter().flat_map(move |(p, os)| {
                os.iter().map(move |o| Triple {
                    subject: s.clone(),
                    predicate: p.clone(),
                    object: o.clone(),
                })
            })
        })
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) -> Result<usize, TermError> {
        let mut added = 0;
        for t in triples {
            if self.insert(t)? {
                added += 1;
            }
        }
        Ok(added)
    }

    /// Union of two graphs.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut out = self.clone();
        for t in other.iter() {
            out.insert_unchecked(t);
        }
        out
    }

    pub fn is_subset_of(&self, other: &Graph) -> bool {
        self.iter().all(|t| other.contains(&t))
    }

    /// Triples matching every bound slot, sorted by (subject, predicate, object).
    pub fn match_pattern(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<Triple> {
        let mk = |s: &Term, p: &Term, o: &Term| Triple {
            subject: s.clone(),
            predicate: p.clone(),
            object: o.clone(),
        };
        let mut out: Vec<Triple> = match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.contains_terms(s, p, o) {
                    vec![mk(s, p, o)]
                } else {
                    Vec::new()
                }
            }
            (Some(s), Some(p), None) => self
                .spo
                .get(s)
                .and_then(|m| m.get(p))
                .map(|os| os.iter().map(|o| mk(s, p, o)).collect())
                .unwrap_or_default(),
            (Some(s), None, o) => self
                .spo
                .get(s)
                .map(|pm| {
                    pm.iter()
                        .flat_map(|(p, os)| os.iter().map(move |ob| (p, ob)))
                        .filter(|(_, ob)| o.is_none_or(|o| *ob == o))
                        .map(|(p, ob)| mk(s, p, ob))
                        .collect()
                })
                .unwrap_or_default(),
            (None, Some(p), Some(o)) => self
                .pos
                .get(p)
                .and_then(|m| m.get(o))
                .map(|ss| ss.iter().map(|s| mk(s, p, o)).collect())
                .unwrap_or_default(),
            (None, Some(p), None) => self
                .pos
                .get(p)
                .map(|om| {
                    om.iter()
                        .flat_map(|(o, ss)| ss.iter().map(move |s| mk(s, p, o)))
                        .collect()
                })
                .unwrap_or_default(),
            (None, None, Some(o)) => self
                .osp
                .get(o)
                .map(|sm| {
                    sm.iter()
                        .flat_map(|(s, ps)| ps.iter().map(move |p| mk(s, p, o)))
                        .collect()
                })
                .unwrap_or_default(),
            (None, None, None) => self.iter().collect(),
        };
        out.sort();
        out
    }

    /// Objects of `(s, p, ?)`.
    pub fn objects<'a>(&'a self, s: &Term, p: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo
            .get(s)
            .and_then(|m| m.get(p))
            .into_iter()
            .flat_map(|set| set.iter())
    }

    /// Subjects of `(?, p, o)`.
    pub fn subjects<'a>(&'a self, p: &Term, o: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        self.pos
            .get(p)
            .and_then(|m| m.get(o))
            .into_iter()
            .flat_map(|set| set.iter())
    }

    /// All `(s, o)` pairs for predicate `p`.
    pub fn pairs<'a>(&'a self, p: &Term) -> impl Iterator<Item = (&'a Term, &'a Term)> + 'a {
        self.pos
            .get(p)
            .into_iter()
            .flat_map(|om| om.iter().flat_map(|(o, ss)| ss.iter().map(move |s| (s, o))))
    }

    pub fn predicates(&self) -> impl Iterator<Item = &Term> + '_ {
        self.pos.keys()
    }

    /// Every term used in subject or object position, sorted and deduplicated.
    pub fn nodes(&self) -> BTreeSet<Term> {
        self.spo.keys().chain(self.osp.keys()).cloned().collect()
    }

    /// Index-coherence check used by tests: the three orders describe the same set.
    pub fn indexes_agree(&self) -> bool {
        let count = |idx: &Index| -> usize { idx.values().flat_map(|m| m.values()).map(|s| s.len()).sum() };
        if count(&self.spo) != self.len || count(&self.pos) != self.len || count(&self.osp) != self.len {
            return false;
        }
        self.iter().all(|t| {
            self.pos
                .get(&t.predicate)
                .and_then(|m| m.get(&t.object))
                .is_some_and(|s| s.contains(&t.subject))
                && self
                    .osp
                    .get(&t.object)
                    .and_then(|m| m.get(&t.subject))
                    .is_some_and(|s| s.contains(&t.predicate))
        })
    }
}

impl FromIterator<Triple> for Graph {
    /// Collects already-checked triples; malformed ones are skipped.
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            if t.check().is_ok() {
                g.insert_unchecked(t);
            }
        }
        g
    }
}
