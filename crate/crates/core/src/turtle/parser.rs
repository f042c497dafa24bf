use std::fmt;

use serde::Serialize;

use crate::graph::Graph;
use crate::prefix::{vocab, PrefixMap};
use crate::term::{is_absolute_iri, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned parse message. Lines and columns are 1-based; columns count characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.column, sev, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

/// Result of a successful parse.
#[derive(Debug, Clone)]
pub struct TurtleDocument {
    pub graph: Graph,
    /// Base prefixes overlaid with the document's own `@prefix` directives.
    pub prefixes: PrefixMap,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parses the supported Turtle subset. Any error aborts the whole parse.
pub fn parse_turtle(text: &str, base_prefixes: &PrefixMap) -> Result<TurtleDocument, ParseDiagnostic> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        column: 1,
        prefixes: base_prefixes.clone(),
        base: None,
        graph: Graph::new(),
        warnings: Vec::new(),
    };
    parser.document()?;
    Ok(TurtleDocument {
        graph: parser.graph,
        prefixes: parser.prefixes,
        warnings: parser.warnings,
    })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: PrefixMap,
    base: Option<String>,
    graph: Graph,
    warnings: Vec<ParseDiagnostic>,
}

#[derive(Clone, Copy)]
struct Mark {
    line: usize,
    column: usize,
}

type PResult<T> = Result<T, ParseDiagnostic>;

impl Parser {
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

    fn mark(&self) -> Mark {
        Mark {
            line: self.line,
            column: self.column,
        }
    }

    fn error_at(&self, mark: Mark, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            line: mark.line,
            column: mark.column,
            message: message.into(),
            severity: Severity::Error,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseDiagnostic {
        self.error_at(self.mark(), message)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn starts_with_keyword(&self, kw: &str) -> bool {
        let n = kw.chars().count();
        kw.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|x| x.eq_ignore_ascii_case(&c)))
            && !self.peek_at(n).is_some_and(|c| is_pn_chars(c) || c == ':')
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char, context: &str) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}' {context}, found {}", self.describe_here())))
        }
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(c) => format!("'{c}'"),
        }
    }

    fn document(&mut self) -> PResult<()> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> PResult<()> {
        if self.starts_with("@prefix") {
            for _ in 0..7 {
                self.bump();
            }
            self.prefix_decl()?;
            return self.expect('.', "after @prefix directive");
        }
        if self.starts_with("@base") {
            for _ in 0..5 {
                self.bump();
            }
            self.base_decl()?;
            return self.expect('.', "after @base directive");
        }
        if self.starts_with_keyword("PREFIX") {
            for _ in 0..6 {
                self.bump();
            }
            return self.prefix_decl();
        }
        if self.starts_with_keyword("BASE") {
            for _ in 0..4 {
                self.bump();
            }
            return self.base_decl();
        }
        if self.peek() == Some('@') {
            return Err(self.error("unknown directive"));
        }
        self.triples()?;
        self.expect('.', "at end of statement")
    }

    fn prefix_decl(&mut self) -> PResult<()> {
        self.skip_ws();
        let mark = self.mark();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !(is_pn_chars(c) || c == '.') {
                return Err(self.error(format!("invalid character '{c}' in prefix label")));
            }
            label.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return Err(self.error("expected ':' after prefix label"));
        }
        self.bump();
        self.skip_ws();
        let ns = self.iri_ref()?;
        if let Some(old) = self.prefixes.get(&label) {
            if old != ns {
                self.warnings.push(ParseDiagnostic {
                    line: mark.line,
                    column: mark.column,
                    message: format!("prefix `{label}:` rebound from <{old}> to <{ns}>"),
                    severity: Severity::Warning,
                });
            }
        }
        self.prefixes.insert(label, ns);
        Ok(())
    }

    fn base_decl(&mut self) -> PResult<()> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri);
        Ok(())
    }

    fn triples(&mut self) -> PResult<()> {
        self.skip_ws();
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn unsupported_here(&self) -> Option<&'static str> {
        match self.peek()? {
            '[' => Some("blank node property lists ('[ ... ]') are not supported"),
            '(' => Some("collections ('( ... )') are not supported"),
            '<' if self.peek_at(1) == Some('<') => Some("RDF-star quoted triples are not supported"),
            '{' => Some("graph blocks are not supported"),
            _ => None,
        }
    }

    fn subject(&mut self) -> PResult<Term> {
        if let Some(msg) = self.unsupported_here() {
            return Err(self.error(msg));
        }
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?.into())),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('"') | Some('\'') => Err(self.error("a literal cannot be a subject")),
            Some(_) => self.prefixed_name(),
            None => Err(self.error("expected subject, found end of input")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> PResult<()> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let object = self.object()?;
                self.graph.insert_unchecked(Triple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> PResult<Term> {
        if self.peek() == Some('a') && !self.peek_at(1).is_some_and(|c| is_pn_chars(c) || c == ':' || c == '.') {
            self.bump();
            return Ok(vocab::rdf_type());
        }
        match self.peek() {
            Some('<') if self.peek_at(1) != Some('<') => Ok(Term::Iri(self.iri_ref()?.into())),
            Some('_') if self.peek_at(1) == Some(':') => Err(self.error("a blank node cannot be a predicate")),
            Some('"') | Some('\'') => Err(self.error("a literal cannot be a predicate")),
            Some('[') | Some('(') => Err(self.error(self.unsupported_here().unwrap_or("unexpected token"))),
            Some(c) if is_pn_chars_base(c) || c == ':' => self.prefixed_name(),
            _ => Err(self.error(format!("expected predicate, found {}", self.describe_here()))),
        }
    }

    fn object(&mut self) -> PResult<Term> {
        if let Some(msg) = self.unsupported_here() {
            return Err(self.error(msg));
        }
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?.into())),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('"') | Some('\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || ((c == '+' || c == '-' || c == '.') && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) => {
                Err(self.error("numeric literal shorthand is not supported; write a typed literal"))
            }
            Some(_) if self.starts_with_keyword("true") || self.starts_with_keyword("false") => {
                Err(self.error("boolean literal shorthand is not supported; write a typed literal"))
            }
            Some(c) if is_pn_chars_base(c) || c == ':' => self.prefixed_name(),
            _ => Err(self.error(format!("expected object, found {}", self.describe_here()))),
        }
    }

    fn iri_ref(&mut self) -> PResult<String> {
        let mark = self.mark();
        if self.peek() != Some('<') {
            return Err(self.error(format!("expected IRI, found {}", self.describe_here())));
        }
        self.bump();
        let mut raw = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error_at(mark, "unterminated IRI")),
                Some('>') => break,
                Some('\\') => {
                    let c = self.bump();
                    match c {
                        Some('u') => raw.push(self.hex_escape(4, mark)?),
                        Some('U') => raw.push(self.hex_escape(8, mark)?),
                        _ => return Err(self.error_at(mark, "bad IRI: invalid escape")),
                    }
                }
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(self.error_at(mark, format!("bad IRI: character {c:?} is not allowed")));
                }
                Some(c) => raw.push(c),
            }
        }
        if is_absolute_iri(&raw) {
            return Ok(raw);
        }
        match &self.base {
            Some(base) => Ok(resolve_iri(base, &raw)),
            None => Err(self.error_at(mark, format!("bad IRI: relative IRI <{raw}> with no @base"))),
        }
    }

    fn hex_escape(&mut self, n: usize, mark: Mark) -> PResult<char> {
        let mut code = 0u32;
        for _ in 0..n {
            let d = self
                .bump()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error_at(mark, "invalid unicode escape"))?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| self.error_at(mark, "invalid unicode code point"))
    }

    fn blank_label(&mut self) -> PResult<Term> {
        let mark = self.mark();
        self.bump();
        self.bump();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || (c == '.' && self.peek_at(1).is_some_and(is_pn_chars)) {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Term::blank(&label).map_err(|_| self.error_at(mark, "empty blank node label"))
    }

    fn prefixed_name(&mut self) -> PResult<Term> {
        let mark = self.mark();
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if is_pn_chars(c) || (c == '.' && self.peek_at(1).is_some_and(|n| is_pn_chars(n) || n == ':')) {
                prefix.push(c);
                self.bump();
            } else {
                return Err(self.error(format!("unexpected character '{c}'")));
            }
        }
        if self.peek() != Some(':') {
            return Err(self.error_at(mark, format!("expected prefixed name, found `{prefix}`")));
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            let inner_dot = c == '.'
                && self
                    .peek_at(1)
                    .is_some_and(|n| is_pn_chars(n) || n == ':' || n == '%' || n == '\\');
            if is_pn_chars(c) || c == ':' || inner_dot {
                local.push(c);
                self.bump();
            } else if c == '%' {
                self.bump();
                local.push('%');
                for _ in 0..2 {
                    match self.bump() {
                        Some(h) if h.is_ascii_hexdigit() => local.push(h),
                        _ => return Err(self.error("invalid percent escape in local name")),
                    }
                }
            } else if c == '\\' {
                self.bump();
                match self.bump() {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                    _ => return Err(self.error("invalid escape in local name")),
                }
            } else {
                break;
            }
        }
        match self.prefixes.expand(&prefix, &local) {
            Some(iri) if is_absolute_iri(&iri) => Ok(Term::Iri(iri.into())),
            Some(iri) => Err(self.error_at(mark, format!("bad IRI: `{iri}` is not absolute"))),
            None => Err(self.error_at(mark, format!("unknown prefix `{prefix}:`"))),
        }
    }

    fn literal(&mut self) -> PResult<Term> {
        let mark = self.mark();
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error_at(mark, "unterminated string literal")),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.bump();
                        self.bump();
                        // A long string may end with extra quote characters.
                        while self.peek() == Some(quote) {
                            lexical.push(quote);
                            self.bump();
                        }
                        break;
                    }
                    lexical.push(c);
                }
                Some('\n') | Some('\r') if !long => {
                    return Err(self.error_at(mark, "unterminated string literal"));
                }
                Some('\\') => {
                    let esc = self.mark();
                    match self.bump() {
                        Some('t') => lexical.push('\t'),
                        Some('b') => lexical.push('\u{8}'),
                        Some('n') => lexical.push('\n'),
                        Some('r') => lexical.push('\r'),
                        Some('f') => lexical.push('\u{c}'),
                        Some('"') => lexical.push('"'),
                        Some('\'') => lexical.push('\''),
                        Some('\\') => lexical.push('\\'),
                        Some('u') => lexical.push(self.hex_escape(4, esc)?),
                        Some('U') => lexical.push(self.hex_escape(8, esc)?),
                        _ => return Err(self.error_at(esc, "invalid escape sequence in string literal")),
                    }
                }
                Some(c) => lexical.push(c),
            }
        }
        if self.peek() == Some('@') {
            self.bump();
            let tag_mark = self.mark();
            let mut tag = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || (c == '-' && !tag.is_empty()) {
                    tag.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
                return Err(self.error_at(tag_mark, "invalid language tag"));
            }
            return Ok(Term::lang_literal(lexical, tag).expect("tag checked non-empty"));
        }
        if self.peek() == Some('^') && self.peek_at(1) == Some('^') {
            self.bump();
            self.bump();
            let dt = match self.peek() {
                Some('<') => self.iri_ref()?,
                _ => match self.prefixed_name()? {
                    Term::Iri(i) => i.to_string(),
                    _ => unreachable!("prefixed names expand to IRIs"),
                },
            };
            return Ok(Term::typed_literal(lexical, dt).expect("datatype IRI is absolute"));
        }
        Ok(Term::literal(lexical))
    }
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_alphabetic()
}

fn is_pn_chars(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '\u{B7}'
}

/// Reference resolution for the relative forms the assets and tests use.
fn resolve_iri(base: &str, reference: &str) -> String {
    let scheme_end = base.find(':').map(|i| i + 1).unwrap_or(0);
    let authority_end = if base[scheme_end..].starts_with("//") {
        base[scheme_end + 2..]
            .find('/')
            .map(|i| scheme_end + 2 + i)
            .unwrap_or(base.len())
    } else {
        scheme_end
    };
    let without_fragment = base.split('#').next().unwrap_or(base);
    if reference.is_empty() {
        return without_fragment.to_string();
    }
    if reference.starts_with('#') {
        return format!("{without_fragment}{reference}");
    }
    if reference.starts_with("//") {
        return format!("{}{reference}", &base[..scheme_end]);
    }
    if reference.starts_with('/') {
        return format!("{}{reference}", &base[..authority_end]);
    }
    let without_query = without_fragment.split('?').next().unwrap_or(without_fragment);
    let dir_end = without_query.rfind('/').map(|i| i + 1).filter(|&i| i > authority_end);
    match dir_end {
        Some(i) => format!("{}{reference}", &without_query[..i]),
        None => format!("{}/{reference}", &without_query[..authority_end]),
    }
}
