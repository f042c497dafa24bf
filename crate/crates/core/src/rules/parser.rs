use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::{NameKind, NameResolver};
use crate::prefix::vocab;
use crate::rules::{Atom, AtomTerm, BodyAtom, Predicate, Rule, RuleError};

/// Parses a rule file and checks safety and stratification.
///
/// ```text
/// # comment
/// R1: Action(?a), violatesEthicalPrinciple(?a, ?p), not upheld(?a, _) -> Wrong(?a) .
/// ```
///
/// Names resolve through `names`; when it carries a vocabulary, unknown
/// classes, properties and individuals are rejected.
pub fn parse_rules(text: &str, names: &NameResolver) -> Result<Vec<Rule>, RuleError> {
    let mut p = Scanner::new(text);
    let mut rules: Vec<Rule> = Vec::new();
    let mut seen = BTreeSet::new();
    loop {
        p.skip_ws();
        if p.eof() {
            break;
        }
        let rule = parse_rule(&mut p, names)?;
        if !seen.insert(rule.id.clone()) {
            return Err(RuleError::Invalid {
                rule: rule.id,
                message: "duplicate rule id".into(),
            });
        }
        check_safety(&rule)?;
        rules.push(rule);
    }
    stratify(&mut rules)?;
    Ok(rules)
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Scanner {
    fn new(text: &str) -> Scanner {
        Scanner {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn error(&self, rule: Option<&str>, message: impl Into<String>) -> RuleError {
        let message = message.into();
        RuleError::Syntax {
            line: self.line,
            column: self.column,
            message: match rule {
                Some(id) => format!("in rule {id}: {message}"),
                None => message,
            },
        }
    }

    fn expect(&mut self, rule: Option<&str>, token: &str) -> Result<(), RuleError> {
        self.skip_ws();
        for (i, want) in token.chars().enumerate() {
            if self.peek_at(i) != Some(want) {
                let found = self.peek().map_or("end of input".to_string(), |c| format!("`{c}`"));
                return Err(self.error(rule, format!("expected `{token}`, found {found}")));
            }
        }
        for _ in token.chars() {
            self.bump();
        }
        Ok(())
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(|c| f(*c)) {
            out.push(c);
            self.bump();
        }
        out
    }

    /// `<iri>`, `prefix:local` or a bare name.
    fn name(&mut self, rule: &str) -> Result<String, RuleError> {
        self.skip_ws();
        if self.peek() == Some('<') {
            let mut out = String::from('<');
            self.bump();
            loop {
                match self.bump() {
                    Some('>') => break,
                    Some(c) if !c.is_whitespace() => out.push(c),
                    _ => return Err(self.error(Some(rule), "unterminated IRI")),
                }
            }
            out.push('>');
            return Ok(out);
        }
        let name = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | ':'));
        if name.is_empty() {
            let found = self.peek().map_or("end of input".to_string(), |c| format!("`{c}`"));
            return Err(self.error(Some(rule), format!("expected a name, found {found}")));
        }
        Ok(name)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-')
}

fn parse_rule(p: &mut Scanner, names: &NameResolver) -> Result<Rule, RuleError> {
    let id = p.take_while(is_word_char);
    if id.is_empty() {
        return Err(p.error(None, "expected a rule id"));
    }
    p.expect(Some(&id), ":")?;

    let mut body = Vec::new();
    loop {
        p.skip_ws();
        if p.peek() == Some('-') && p.peek_at(1) == Some('>') {
            break;
        }
        if !body.is_empty() {
            p.expect(Some(&id), ",")?;
            p.skip_ws();
        }
        let negated = p.peek() == Some('n')
            && p.peek_at(1) == Some('o')
            && p.peek_at(2) == Some('t')
            && p.peek_at(3).is_some_and(char::is_whitespace);
        if negated {
            for _ in 0..3 {
                p.bump();
            }
        }
        let atom = parse_atom(p, names, &id, negated)?;
        body.push(BodyAtom { atom, negated });
    }
    p.expect(Some(&id), "->")?;

    let mut head = Vec::new();
    loop {
        head.push(parse_atom(p, names, &id, false)?);
        p.skip_ws();
        if p.peek() == Some(',') {
            p.bump();
        } else {
            break;
        }
    }
    p.expect(Some(&id), ".")?;
    Ok(Rule {
        id,
        body,
        head,
        stratum: 0,
    })
}

fn parse_atom(p: &mut Scanner, names: &NameResolver, rule: &str, negated: bool) -> Result<Atom, RuleError> {
    let (line, column) = (p.line, p.column);
    let name = p.name(rule)?;
    p.expect(Some(rule), "(")?;
    let mut args = Vec::new();
    loop {
        args.push(parse_arg(p, names, rule)?);
        p.skip_ws();
        match p.peek() {
            Some(',') => {
                p.bump();
            }
            Some(')') => {
                p.bump();
                break;
            }
            _ => return Err(p.error(Some(rule), "expected `,` or `)` in atom arguments")),
        }
    }
    if !negated && args.contains(&AtomTerm::Wildcard) {
        return Err(RuleError::Invalid {
            rule: rule.to_string(),
            message: "`_` is only allowed in negated atoms".into(),
        });
    }
    let kind = match args.len() {
        1 => NameKind::Class,
        2 => NameKind::Property,
        n => {
            return Err(RuleError::Syntax {
                line,
                column,
                message: format!("in rule {rule}: atom `{name}` has {n} arguments; expected 1 or 2"),
            })
        }
    };
    let term = resolve(names, &name, kind, rule, line, column)?;
    let mut args = args.into_iter();
    let first = args.next().expect("one argument");
    match args.next() {
        None => Ok(Atom::Class { class: term, arg: first }),
        Some(second) if term == vocab::rdf_type() => match second {
            AtomTerm::Const(class) => Ok(Atom::Class { class, arg: first }),
            _ => Err(RuleError::Invalid {
                rule: rule.to_string(),
                message: "rdf:type atoms need a constant class; write `Class(?x)`".into(),
            }),
        },
        Some(second) => Ok(Atom::Property {
            property: term,
            subject: first,
            object: second,
        }),
    }
}

fn parse_arg(p: &mut Scanner, names: &NameResolver, rule: &str) -> Result<AtomTerm, RuleError> {
    p.skip_ws();
    match p.peek() {
        Some('?') => {
            p.bump();
            let v = p.take_while(is_word_char);
            if v.is_empty() {
                return Err(p.error(Some(rule), "expected a variable name after `?`"));
            }
            Ok(AtomTerm::Var(v))
        }
        Some('_') if !p.peek_at(1).is_some_and(|c| is_word_char(c) || c == ':') => {
            p.bump();
            Ok(AtomTerm::Wildcard)
        }
        _ => {
            let (line, column) = (p.line, p.column);
            let name = p.name(rule)?;
            resolve(names, &name, NameKind::Individual, rule, line, column).map(AtomTerm::Const)
        }
    }
}

fn resolve(
    names: &NameResolver,
    name: &str,
    kind: NameKind,
    rule: &str,
    line: usize,
    column: usize,
) -> Result<crate::term::Term, RuleError> {
    let term = names.expand(name).map_err(|message| RuleError::Syntax {
        line,
        column,
        message: format!("in rule {rule}: {message}"),
    })?;
    if let Some(v) = &names.vocabulary {
        if !v.knows(kind, &term) {
            return Err(RuleError::UnknownName {
                rule: rule.to_string(),
                kind: kind.describe(),
                name: name.to_string(),
            });
        }
    }
    Ok(term)
}

fn check_safety(rule: &Rule) -> Result<(), RuleError> {
    let bound: BTreeSet<&str> = rule.positive_body().flat_map(Atom::vars).collect();
    for atom in rule.negative_body() {
        if let Some(v) = atom.vars().into_iter().find(|v| !bound.contains(v)) {
            return Err(RuleError::Invalid {
                rule: rule.id.clone(),
                message: format!("unsafe negation: ?{v} in `not {atom}` is not bound by a positive atom"),
            });
        }
    }
    for atom in &rule.head {
        if let Some(v) = atom.vars().into_iter().find(|v| !bound.contains(v)) {
            return Err(RuleError::Invalid {
                rule: rule.id.clone(),
                message: format!("head variable ?{v} is not bound by a positive body atom"),
            });
        }
    }
    Ok(())
}

/// Assigns each rule the lowest stratum such that positive dependencies stay
/// within or below it and negated ones lie strictly below.
fn stratify(rules: &mut [Rule]) -> Result<(), RuleError> {
    let mut level: BTreeMap<Predicate, usize> = BTreeMap::new();
    let preds: BTreeSet<Predicate> = rules
        .iter()
        .flat_map(|r| r.body.iter().map(|b| b.atom.predicate()).chain(r.head.iter().map(Atom::predicate)))
        .collect();
    let limit = preds.len();
    loop {
        let mut changed = false;
        for rule in rules.iter() {
            let at = |p: &Predicate| level.get(p).copied().unwrap_or(0);
            let mut need = rule.head.iter().map(|h| at(&h.predicate())).max().unwrap_or(0);
            for b in &rule.body {
                let l = at(&b.atom.predicate()) + usize::from(b.negated);
                need = need.max(l);
            }
            if need > limit {
                return Err(RuleError::Unstratifiable { rule: rule.id.clone() });
            }
            for h in &rule.head {
                let slot = level.entry(h.predicate()).or_insert(0);
                if *slot < need {
                    *slot = need;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for rule in rules.iter_mut() {
        rule.stratum = rule
            .head
            .iter()
            .map(|h| level.get(&h.predicate()).copied().unwrap_or(0))
            .max()
            .unwrap_or(0);
    }
    Ok(())
}
