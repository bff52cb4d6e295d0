//! Line-oriented N-Triples reader.
//!
//! Each non-blank, non-comment line must hold exactly one statement:
//! `subject predicate object .` with an optional trailing comment.
//! Gzip input is detected by its magic bytes and decompressed on the fly.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::term::{Literal, LiteralAnnotation, Term};

/// What to do with lines that do not parse.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MalformedPolicy {
    Strict,
    #[default]
    SkipMalformed,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("invalid UTF-8")]
    InvalidUtf8,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unterminated IRI")]
    UnterminatedIri,
    #[error("relative IRI <{0}>")]
    RelativeIri(String),
    #[error("character {0:?} not allowed in IRI")]
    InvalidIriChar(char),
    #[error("unterminated literal")]
    UnterminatedLiteral,
    #[error("invalid escape sequence")]
    InvalidEscape,
    #[error("empty or invalid blank node label")]
    InvalidBlankLabel,
    #[error("invalid language tag")]
    InvalidLanguageTag,
    #[error("unexpected content after statement terminator")]
    TrailingContent,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: SyntaxError },
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
}

/// One parsed statement before interning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl std::fmt::Display for Statement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// Opens a file, transparently decompressing gzip content.
pub fn open_source(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    let mut reader = BufReader::new(File::open(path)?);
    let is_gzip = reader.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    if is_gzip {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(reader))))
    } else {
        Ok(Box::new(reader))
    }
}

/// Streaming statement iterator over a line source.
///
/// In [`MalformedPolicy::SkipMalformed`] mode bad lines are counted and
/// skipped; in strict mode the first one is returned as an error and the
/// iterator ends.
pub struct StatementReader<R> {
    reader: R,
    buf: Vec<u8>,
    line: usize,
    policy: MalformedPolicy,
    malformed: usize,
    finished: bool,
}

impl<R: BufRead> StatementReader<R> {
    pub fn new(reader: R, policy: MalformedPolicy) -> Self {
        Self {
            reader,
            buf: Vec::with_capacity(256),
            line: 0,
            policy,
            malformed: 0,
            finished: false,
        }
    }

    /// Number of malformed lines skipped so far.
    pub fn malformed_count(&self) -> usize {
        self.malformed
    }

    pub fn lines_read(&self) -> usize {
        self.line
    }
}

impl<R: Read> StatementReader<BufReader<R>> {
    pub fn from_read(reader: R, policy: MalformedPolicy) -> Self {
        Self::new(BufReader::new(reader), policy)
    }
}

impl<R: BufRead> Iterator for StatementReader<R> {
    type Item = Result<Statement, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.finished {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => {
                    self.finished = true;
                    return None;
                }
                Ok(_) => {}
                Err(e) => {
                    self.finished = true;
                    return Some(Err(e.into()));
                }
            }
            self.line += 1;
            let parsed = std::str::from_utf8(&self.buf)
                .map_err(|_| SyntaxError::InvalidUtf8)
                .and_then(parse_line);
            match parsed {
                Ok(Some(stmt)) => return Some(Ok(stmt)),
                Ok(None) => continue,
                Err(reason) => match self.policy {
                    MalformedPolicy::SkipMalformed => {
                        log::debug!("skipping line {}: {}", self.line, reason);
                        self.malformed += 1;
                    }
                    MalformedPolicy::Strict => {
                        self.finished = true;
                        return Some(Err(ParseError::Syntax {
                            line: self.line,
                            reason,
                        }));
                    }
                },
            }
        }
        None
    }
}

/// Parses a single line. Blank lines and comment lines yield `Ok(None)`.
pub fn parse_line(line: &str) -> Result<Option<Statement>, SyntaxError> {
    let mut cur = Cursor::new(line.trim_end_matches(['\n', '\r']));
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }
    let subject = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        Some('_') => Term::BlankNode(cur.blank_label()?),
        _ => return Err(SyntaxError::Expected("subject IRI or blank node")),
    };
    cur.skip_ws();
    let predicate = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        _ => return Err(SyntaxError::Expected("predicate IRI")),
    };
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Term::Iri(cur.iri()?),
        Some('_') => Term::BlankNode(cur.blank_label()?),
        Some('"') => Term::Literal(cur.literal()?),
        _ => return Err(SyntaxError::Expected("object term")),
    };
    cur.skip_ws();
    if !cur.eat('.') {
        return Err(SyntaxError::Expected("'.'"));
    }
    cur.skip_ws();
    if !(cur.at_end() || cur.peek() == Some('#')) {
        return Err(SyntaxError::TrailingContent);
    }
    Ok(Some(Statement {
        subject,
        predicate,
        object,
    }))
}

struct Cursor<'a> {
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self { rest: s }
    }

    fn at_end(&self) -> bool {
        self.rest.is_empty()
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

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn iri(&mut self) -> Result<String, SyntaxError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(SyntaxError::UnterminatedIri),
                Some('>') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return Err(SyntaxError::InvalidEscape),
                    };
                    check_iri_char(c)?;
                    out.push(c);
                }
                Some(c) => {
                    check_iri_char(c)?;
                    out.push(c);
                }
            }
        }
        if !has_scheme(&out) {
            return Err(SyntaxError::RelativeIri(out));
        }
        Ok(out)
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, SyntaxError> {
        if self.rest.len() < digits || !self.rest.is_char_boundary(digits) {
            return Err(SyntaxError::InvalidEscape);
        }
        let (hex, rest) = self.rest.split_at(digits);
        let code = u32::from_str_radix(hex, 16).map_err(|_| SyntaxError::InvalidEscape)?;
        let c = char::from_u32(code).ok_or(SyntaxError::InvalidEscape)?;
        self.rest = rest;
        Ok(c)
    }

    fn blank_label(&mut self) -> Result<String, SyntaxError> {
        if !self.rest.starts_with("_:") {
            return Err(SyntaxError::InvalidBlankLabel);
        }
        self.rest = &self.rest[2..];
        let end = self
            .rest
            .char_indices()
            .find(|&(_, c)| !is_label_char(c))
            .map_or(self.rest.len(), |(i, _)| i);
        // A label may contain dots but never ends with one.
        let label = self.rest[..end].trim_end_matches('.');
        match label.chars().next() {
            Some(c) if c != '.' && c != '-' => {}
            _ => return Err(SyntaxError::InvalidBlankLabel),
        }
        let label = label.to_owned();
        self.rest = &self.rest[label.len()..];
        Ok(label)
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        self.bump();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return Err(SyntaxError::UnterminatedLiteral),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        None => return Err(SyntaxError::UnterminatedLiteral),
                        Some(_) => return Err(SyntaxError::InvalidEscape),
                    };
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
            }
        }
        let annotation = if self.rest.starts_with("^^") {
            self.rest = &self.rest[2..];
            if self.peek() != Some('<') {
                return Err(SyntaxError::Expected("datatype IRI"));
            }
            LiteralAnnotation::Datatype(self.iri()?)
        } else if self.eat('@') {
            let end = self
                .rest
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                .unwrap_or(self.rest.len());
            let tag = &self.rest[..end];
            if !is_language_tag(tag) {
                return Err(SyntaxError::InvalidLanguageTag);
            }
            self.rest = &self.rest[end..];
            LiteralAnnotation::Language(tag.to_owned())
        } else {
            LiteralAnnotation::Plain
        };
        Ok(Literal {
            lexical,
            annotation,
        })
    }
}

fn check_iri_char(c: char) -> Result<(), SyntaxError> {
    if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
        Err(SyntaxError::InvalidIriChar(c))
    } else {
        Ok(())
    }
}

fn has_scheme(iri: &str) -> bool {
    let Some(colon) = iri.find(':') else {
        return false;
    };
    let scheme = &iri[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '\u{b7}')
}

fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let primary = parts.next().unwrap_or("");
    !primary.is_empty()
        && primary.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}
