use crate::ontology::{ClassExpression, NameKind, NameResolver, PropertyPath};
use crate::prefix::vocab;
use crate::query::{PatternTerm, QueryError, TriplePattern};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Var(String),
    Word(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(t: Option<&Token>) -> String {
    match t.map(|t| &t.tok) {
        None => "end of query".into(),
        Some(Tok::Open) => "`(`".into(),
        Some(Tok::Close) => "`)`".into(),
        Some(Tok::LBrace) => "`{`".into(),
        Some(Tok::RBrace) => "`}`".into(),
        Some(Tok::Comma) => "`,`".into(),
        Some(Tok::Dot) => "`.`".into(),
        Some(Tok::Var(v)) => format!("`?{v}`"),
        Some(Tok::Word(w)) => format!("`{w}`"),
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | ':')
}

fn tokenize(text: &str) -> Result<(Vec<Token>, (usize, usize)), QueryError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    let advance = |c: char, line: &mut usize, column: &mut usize| {
        if c == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let simple = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            advance(c, &mut line, &mut column);
            out.push(Token { tok, line: l, column: col });
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            advance(c, &mut line, &mut column);
            continue;
        }
        let word = if c == '<' {
            let mut w = String::new();
            loop {
                match chars.next() {
                    Some(ch) => {
                        advance(ch, &mut line, &mut column);
                        if ch.is_whitespace() {
                            return Err(QueryError::new(l, col, "unterminated IRI"));
                        }
                        w.push(ch);
                        if ch == '>' {
                            break;
                        }
                    }
                    None => return Err(QueryError::new(l, col, "unterminated IRI")),
                }
            }
            Tok::Word(w)
        } else if c == '?' {
            chars.next();
            advance(c, &mut line, &mut column);
            let mut v = String::new();
            while let Some(&ch) = chars.peek().filter(|ch| ch.is_alphanumeric() || **ch == '_') {
                v.push(ch);
                chars.next();
                advance(ch, &mut line, &mut column);
            }
            if v.is_empty() {
                return Err(QueryError::new(l, col, "expected a variable name after `?`"));
            }
            Tok::Var(v)
        } else if is_name_char(c) {
            let mut w = String::new();
            while let Some(&ch) = chars.peek().filter(|ch| is_name_char(**ch)) {
                w.push(ch);
                chars.next();
                advance(ch, &mut line, &mut column);
            }
            Tok::Word(w)
        } else {
            return Err(QueryError::new(l, col, format!("unexpected character `{c}`")));
        };
        out.push(Token {
            tok: word,
            line: l,
            column: col,
        });
    }
    Ok((out, (line, column)))
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    names: &'a NameResolver,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_word(&self, offset: usize) -> Option<&str> {
        match self.toks.get(self.pos + offset).map(|t| &t.tok) {
            Some(Tok::Word(w)) => Some(w),
            _ => None,
        }
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.column))
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        let (l, c) = self.here();
        QueryError::new(l, c, message)
    }

    fn unexpected(&self, wanted: &str) -> QueryError {
        self.err(format!("expected {wanted}, found {}", describe(self.peek())))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn resolve(&mut self, kind: NameKind) -> Result<crate::term::Term, QueryError> {
        let (l, c) = self.here();
        let Some(name) = self.peek_word(0).map(str::to_string) else {
            return Err(self.unexpected(&format!("a {} name", kind.describe())));
        };
        self.pos += 1;
        self.names.resolve(&name, kind).map_err(|m| QueryError::new(l, c, m))
    }

    fn expression(&mut self) -> Result<ClassExpression, QueryError> {
        let mut parts = vec![self.unit()?];
        while self.peek_word(0) == Some("and") {
            self.pos += 1;
            parts.push(self.unit()?);
        }
        Ok(ClassExpression::and(parts))
    }

    fn unit(&mut self) -> Result<ClassExpression, QueryError> {
        match self.peek_word(0) {
            Some("inverse") => {
                self.pos += 1;
                let p = self.resolve(NameKind::Property)?;
                self.restriction(PropertyPath::inverse(p))
            }
            Some("some") => Err(self.err("dangling `some`: no property before it")),
            Some("and") => Err(self.err("dangling `and`: expected an expression before it")),
            Some(_) if self.peek_word(1) == Some("some") => {
                let p = self.resolve(NameKind::Property)?;
                self.restriction(PropertyPath::forward(p))
            }
            _ => self.primary(),
        }
    }

    fn restriction(&mut self, path: PropertyPath) -> Result<ClassExpression, QueryError> {
        if self.peek_word(0) != Some("some") {
            return Err(self.unexpected("`some`"));
        }
        self.pos += 1;
        let filler = match self.peek().map(|t| &t.tok) {
            None | Some(Tok::Close) | Some(Tok::RBrace) | Some(Tok::Comma) | Some(Tok::Dot) => ClassExpression::Anything,
            Some(Tok::Word(w)) if w == "and" => ClassExpression::Anything,
            _ => self.primary()?,
        };
        Ok(ClassExpression::some(path, filler))
    }

    fn primary(&mut self) -> Result<ClassExpression, QueryError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Open) => {
                let open = self.here();
                self.pos += 1;
                let inner = self.expression()?;
                if !self.eat(&Tok::Close) {
                    if self.peek().is_none() {
                        return Err(QueryError::new(open.0, open.1, "unbalanced `(`: missing `)`"));
                    }
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            Some(Tok::LBrace) => {
                self.pos += 1;
                let mut items = vec![self.resolve(NameKind::Individual)?];
                while self.eat(&Tok::Comma) {
                    items.push(self.resolve(NameKind::Individual)?);
                }
                if !self.eat(&Tok::RBrace) {
                    return Err(self.unexpected("`,` or `}`"));
                }
                Ok(ClassExpression::one_of(items).expect("nonempty"))
            }
            Some(Tok::Word(w)) if self.names.is_thing(&w) => {
                self.pos += 1;
                Ok(ClassExpression::Anything)
            }
            Some(Tok::Word(w)) if matches!(w.as_str(), "and" | "some" | "inverse") => {
                Err(self.err(format!("unexpected keyword `{w}`")))
            }
            Some(Tok::Word(_)) => self.resolve(NameKind::Class).map(ClassExpression::Named),
            Some(Tok::Close) => Err(self.err("unbalanced `)`")),
            _ => Err(self.unexpected("a class expression")),
        }
    }

    fn pattern_term(&mut self, kind: NameKind) -> Result<PatternTerm, QueryError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(PatternTerm::Var(v))
            }
            Some(Tok::Word(w)) if kind == NameKind::Property && w == "a" => {
                self.pos += 1;
                Ok(PatternTerm::Const(vocab::rdf_type()))
            }
            Some(Tok::Word(_)) => self.resolve(kind).map(PatternTerm::Const),
            _ => Err(self.unexpected("a variable or name")),
        }
    }
}

/// Parses a Manchester-style class expression: `and`, `p some C`, bare
/// `p some`, `inverse p some C`, `{a, b}`, parentheses and `Thing`.
pub fn parse_class_expression(text: &str, names: &NameResolver) -> Result<ClassExpression, QueryError> {
    let (toks, end) = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        names,
    };
    if p.peek().is_none() {
        return Err(p.err("empty class expression"));
    }
    let expr = p.expression()?;
    if let Some(t) = p.peek() {
        if t.tok == Tok::Close {
            return Err(p.err("unbalanced `)`"));
        }
        return Err(p.unexpected("`and` or end of query"));
    }
    Ok(expr)
}

/// Parses `s p o . s p o ...`; terms are `?var`, names or `<iri>`, and `a`
/// stands for `rdf:type` in predicate position. An empty text is an empty
/// pattern list.
pub fn parse_patterns(text: &str, names: &NameResolver) -> Result<Vec<TriplePattern>, QueryError> {
    let (toks, end) = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        names,
    };
    let mut out = Vec::new();
    while p.peek().is_some() {
        let subject = p.pattern_term(NameKind::Individual)?;
        let predicate = p.pattern_term(NameKind::Property)?;
        let object = p.pattern_term(NameKind::Individual)?;
        out.push(TriplePattern {
            subject,
            predicate,
            object,
        });
        if !p.eat(&Tok::Dot) && p.peek().is_some() {
            return Err(p.unexpected("`.`"));
        }
    }
    if !is_connected(&out) {
        return Err(QueryError::new(1, 1, "patterns must share variables so they form one connected graph"));
    }
    Ok(out)
}

fn is_connected(patterns: &[TriplePattern]) -> bool {
    if patterns.len() <= 1 {
        return true;
    }
    let mut reached = vec![false; patterns.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let vars = patterns[i].vars();
        for (j, other) in patterns.iter().enumerate() {
            if !reached[j] && other.vars().iter().any(|v| vars.contains(v)) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::Vocabulary;
    use crate::term::Term;

    fn names() -> NameResolver {
        NameResolver::default()
    }

    fn c(local: &str) -> ClassExpression {
        ClassExpression::Named(vocab::apple(local))
    }

    fn p(local: &str) -> Term {
        vocab::apple(local)
    }

    #[test]
    fn single_name() {
        assert_eq!(parse_class_expression("Agent", &names()).unwrap(), c("Agent"));
        assert_eq!(parse_class_expression("Thing", &names()).unwrap(), ClassExpression::Anything);
    }

    #[test]
    fn bare_restrictions_with_aliases() {
        let e = parse_class_expression(
            "Action and (upholdsEthicalPrinciples some) and (violatesEthicalPrinciples some)",
            &names(),
        )
        .unwrap();
        assert_eq!(
            e,
            ClassExpression::And(vec![
                c("Action"),
                ClassExpression::some(PropertyPath::forward(p("upholdsEthicalPrinciple")), ClassExpression::Anything),
                ClassExpression::some(PropertyPath::forward(p("violatesEthicalPrinciple")), ClassExpression::Anything),
            ])
        );
    }

    #[test]
    fn nested_inverse_with_nominal() {
        let e = parse_class_expression(
            "Consequence and inverse hasConsequence some (Action and inverse doesAction some {Doctor})",
            &names(),
        )
        .unwrap();
        let inner = ClassExpression::And(vec![
            c("Action"),
            ClassExpression::some(
                PropertyPath::inverse(p("doesAction")),
                ClassExpression::one_of([p("Doctor")]).unwrap(),
            ),
        ]);
        assert_eq!(
            e,
            ClassExpression::And(vec![
                c("Consequence"),
                ClassExpression::some(PropertyPath::inverse(p("hasConsequence")), inner),
            ])
        );
        assert!(e.is_well_formed());
    }

    #[test]
    fn filler_is_a_single_primary() {
        let e = parse_class_expression("affects some Agent and Action", &names()).unwrap();
        assert_eq!(e.conjuncts().len(), 2);
        assert_eq!(e.conjuncts()[1], c("Action"));
    }

    #[test]
    fn nominal_sets() {
        let e = parse_class_expression("{Doctor, Patient}", &names()).unwrap();
        assert_eq!(e, ClassExpression::one_of([p("Doctor"), p("Patient")]).unwrap());
        assert!(parse_class_expression("{}", &names()).is_err());
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_class_expression("Agent and some Action", &names()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 11));
        assert!(e.message.contains("dangling `some`"));

        let e = parse_class_expression("(Agent and Action", &names()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(e.message.contains("unbalanced"));

        let e = parse_class_expression("Agent)", &names()).unwrap_err();
        assert_eq!(e.column, 6);

        let e = parse_class_expression("Agent and\n  inverse doesAction Doctor", &names()).unwrap_err();
        assert_eq!((e.line, e.column), (2, 22));

        assert!(parse_class_expression("", &names()).is_err());
        assert!(parse_class_expression("Agent and", &names()).is_err());
    }

    #[test]
    fn unknown_names_need_a_vocabulary() {
        let mut v = Vocabulary::default();
        v.classes.insert(p("Agent"));
        let r = NameResolver::with_vocabulary(v);
        let e = parse_class_expression("Agent and Agnet", &r).unwrap_err();
        assert_eq!(e.column, 11);
        assert!(e.message.contains("unknown class `Agnet`"));
        let e = parse_class_expression("Agent and knows some Agent", &r).unwrap_err();
        assert!(e.message.contains("unknown property"));
    }

    #[test]
    fn patterns_parse_and_must_connect() {
        let pats = parse_patterns("?x doesAction ?a . ?a a Action .", &names()).unwrap();
        assert_eq!(pats.len(), 2);
        assert_eq!(pats[1].predicate, PatternTerm::Const(vocab::rdf_type()));
        assert!(parse_patterns("", &names()).unwrap().is_empty());
        assert!(parse_patterns("?x doesAction ?a . ?b a Action", &names()).is_err());
        assert!(parse_patterns("?x doesAction", &names()).is_err());
        assert!(parse_patterns("?x doesAction ?a ?b", &names()).is_err());
    }
}
