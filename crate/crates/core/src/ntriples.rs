//! Line-oriented, lossless triple serialization.
//!
//! The format is N-Triples restricted to IRIs and literals, with one
//! addition: a comment line `# resourcemap: <iri>` names the graph. Output
//! lines are sorted so serializing the same graph twice gives identical
//! bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{vocab, Iri, Literal, ModelError, ResourceMapGraph, Term, Triple};

pub const MEDIA_TYPE: &str = "application/n-triples";
pub const FILE_EXTENSION: &str = "nt";
const HEADER_PREFIX: &str = "# resourcemap:";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NTriplesError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot tell which Resource Map this is: {0}")]
    AmbiguousGraphName(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Serializes the graph, one sorted line per triple after the header.
pub fn to_ntriples(graph: &ResourceMapGraph) -> String {
    let mut lines: Vec<String> = graph.iter().map(triple_line).collect();
    lines.sort();
    let mut out = format!("{HEADER_PREFIX} <{}>\n", graph.rem_uri());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn triple_line(t: &Triple) -> String {
    let mut line = format!("<{}> <{}> ", t.subject, t.predicate);
    write_term(&mut line, &t.object);
    line.push_str(" .");
    line
}

fn write_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(iri) => write!(out, "<{iri}>").unwrap(),
        Term::Literal(lit) => {
            out.push('"');
            out.push_str(&escape_literal(&lit.lexical));
            out.push('"');
            if let Some(dt) = &lit.datatype {
                write!(out, "^^<{dt}>").unwrap();
            }
        }
    }
}

/// Backslash escapes for quote, backslash, newline and carriage return;
/// `\uXXXX` for every other control character.
pub fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => write!(out, "\\u{:04X}", c as u32).unwrap(),
            c => out.push(c),
        }
    }
    out
}

/// Parses the line format. The graph name comes from the header, then
/// `rem_override`, then the subject of the only `ore:describes` triple.
pub fn from_ntriples(
    text: &str,
    rem_override: Option<&Iri>,
) -> Result<ResourceMapGraph, NTriplesError> {
    let mut header: Option<Iri> = None;
    let mut triples = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim_matches([' ', '\t', '\r']);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(HEADER_PREFIX) {
            if header.is_none() {
                let mut cursor = Cursor::new(rest, line_no);
                cursor.skip_ws();
                let iri = cursor.iri()?;
                cursor.skip_ws();
                cursor.expect_end()?;
                header = Some(iri);
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        triples.push(parse_line(line, line_no)?);
    }

    let rem = match (header, rem_override) {
        (Some(h), _) => h,
        (None, Some(o)) => o.clone(),
        (None, None) => infer_rem(&triples)?,
    };
    let mut graph = ResourceMapGraph::new(rem)?;
    graph.extend(triples);
    Ok(graph)
}

fn infer_rem(triples: &[Triple]) -> Result<Iri, NTriplesError> {
    let subjects: BTreeSet<&Iri> = triples
        .iter()
        .filter(|t| t.predicate.as_str() == vocab::ORE_DESCRIBES)
        .map(|t| &t.subject)
        .collect();
    let describes = triples
        .iter()
        .filter(|t| t.predicate.as_str() == vocab::ORE_DESCRIBES)
        .count();
    match (describes, subjects.iter().next()) {
        (1, Some(s)) => Ok((*s).clone()),
        (0, _) => Err(NTriplesError::AmbiguousGraphName(
            "no header and no ore:describes triple".into(),
        )),
        (n, _) => Err(NTriplesError::AmbiguousGraphName(format!(
            "no header and {n} ore:describes triples"
        ))),
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Triple, NTriplesError> {
    let mut cursor = Cursor::new(line, line_no);
    let subject = cursor.iri()?;
    cursor.skip_ws();
    let predicate = cursor.iri()?;
    cursor.skip_ws();
    let object = match cursor.peek() {
        Some('<') => Term::Iri(cursor.iri()?),
        Some('"') => Term::Literal(cursor.literal()?),
        Some('_') => return Err(cursor.error("blank nodes are not supported")),
        _ => return Err(cursor.error("expected an IRI or literal object")),
    };
    cursor.skip_ws();
    if !cursor.eat('.') {
        return Err(cursor.error("expected '.'"));
    }
    cursor.skip_ws();
    if !(cursor.at_end() || cursor.peek() == Some('#')) {
        return Err(cursor.error("unexpected text after '.'"));
    }
    Ok(Triple::new(subject, predicate, object))
}

struct Cursor<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { rest: text, line }
    }

    fn error(&self, message: impl Into<String>) -> NTriplesError {
        NTriplesError::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest.chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.rest = &self.rest[c.len_utf8()..];
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.rest.is_empty()
    }

    fn expect_end(&self) -> Result<(), NTriplesError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing text"))
        }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn iri(&mut self) -> Result<Iri, NTriplesError> {
        if !self.eat('<') {
            return Err(self.error("expected '<'"));
        }
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => value.push(self.unicode_escape()?),
                Some(c) => value.push(c),
            }
        }
        Iri::parse(value).map_err(|e| self.error(e.to_string()))
    }

    fn literal(&mut self) -> Result<Literal, NTriplesError> {
        self.bump();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated literal")),
                Some('"') => break,
                Some('\\') => match self.peek() {
                    Some('u' | 'U') => lexical.push(self.unicode_escape()?),
                    Some(c) => {
                        let decoded = match c {
                            't' => '\t',
                            'b' => '\u{8}',
                            'n' => '\n',
                            'r' => '\r',
                            'f' => '\u{c}',
                            '"' => '"',
                            '\'' => '\'',
                            '\\' => '\\',
                            other => return Err(self.error(format!("unknown escape \\{other}"))),
                        };
                        self.bump();
                        lexical.push(decoded);
                    }
                    None => return Err(self.error("unterminated escape")),
                },
                Some(c) => lexical.push(c),
            }
        }
        if self.peek() == Some('@') {
            return Err(self.error("language-tagged literals are not supported"));
        }
        let datatype = if self.rest.starts_with("^^") {
            self.rest = &self.rest[2..];
            Some(self.iri()?)
        } else {
            None
        };
        Ok(Literal { lexical, datatype })
    }

    /// Decodes `uXXXX` / `UXXXXXXXX` after a consumed backslash.
    fn unicode_escape(&mut self) -> Result<char, NTriplesError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error("expected \\u or \\U escape")),
        };
        if self.rest.len() < width || !self.rest.is_char_boundary(width) {
            return Err(self.error("truncated unicode escape"));
        }
        let (hex, rest) = self.rest.split_at(width);
        let code = u32::from_str_radix(hex, 16)
            .map_err(|_| self.error(format!("bad unicode escape {hex}")))?;
        self.rest = rest;
        char::from_u32(code).ok_or_else(|| self.error(format!("invalid code point {code:X}")))
    }
}

/// Turtle-style listing with the ORE prefixes, for display only. It is not
/// a parse source.
pub fn to_pretty(graph: &ResourceMapGraph) -> String {
    let compact = |iri: &Iri| -> String {
        for (prefix, ns, _) in vocab::PREFIXES {
            if let Some(local) = iri.as_str().strip_prefix(ns) {
                if !local.is_empty()
                    && local
                        .chars()
                        .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
                {
                    return format!("{prefix}:{local}");
                }
            }
        }
        format!("<{iri}>")
    };
    let mut out = String::new();
    for (prefix, ns, _) in vocab::PREFIXES {
        writeln!(out, "@prefix {prefix}: <{ns}> .").unwrap();
    }
    writeln!(out, "# graph <{}>", graph.rem_uri()).unwrap();
    let mut current: Option<&Iri> = None;
    for t in graph.iter() {
        if current != Some(&t.subject) {
            if current.is_some() {
                out.push('\n');
            }
            writeln!(out, "{}", compact(&t.subject)).unwrap();
            current = Some(&t.subject);
        }
        let object = match &t.object {
            Term::Iri(o) => compact(o),
            Term::Literal(lit) => {
                let mut s = String::new();
                write_term(&mut s, &Term::Literal(lit.clone()));
                s
            }
        };
        writeln!(out, "    {} {} .", compact(&t.predicate), object).unwrap();
    }
    out
}
