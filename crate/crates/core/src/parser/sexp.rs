//! Tokenizer and s-expression reader. Parentheses and square brackets are
//! standalone tokens; `;` starts a comment running to end of line.

use std::fmt;

use thiserror::Error;

/// Nesting deeper than this is rejected so hostile input cannot exhaust
/// the stack of the recursive interpreters downstream.
const MAX_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    /// Byte offset into the input.
    pub offset: usize,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    /// Length in bytes.
    pub length: usize,
}

impl SourceSpan {
    /// Span of `length` bytes starting at byte `offset` of `text`.
    pub fn at(text: &str, offset: usize, length: usize) -> SourceSpan {
        LineIndex::new(text).span(offset, length)
    }
}

/// Byte offsets of line starts, for offset to line/column conversion.
pub struct LineIndex<'a> {
    text: &'a str,
    starts: Vec<usize>,
}

impl<'a> LineIndex<'a> {
    pub fn new(text: &'a str) -> LineIndex<'a> {
        let starts = std::iter::once(0).chain(text.match_indices('\n').map(|(i, _)| i + 1)).collect();
        LineIndex { text, starts }
    }

    pub fn span(&self, offset: usize, length: usize) -> SourceSpan {
        let offset = offset.min(self.text.len());
        let length = length.min(self.text.len() - offset);
        let line = self.starts.partition_point(|&s| s <= offset);
        let line_start = self.starts[line - 1];
        let column = self.text[line_start..offset].chars().count() + 1;
        SourceSpan { offset, line, column, length }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub fn new(span: SourceSpan, expected: impl Into<String>, found: impl Into<String>) -> ParseError {
        ParseError { span, expected: expected.into(), found: found.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delim {
    Paren,
    Bracket,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    /// Lower-cased token text.
    Atom(String, SourceSpan),
    List(Delim, Vec<Sexp>, SourceSpan),
}

impl Sexp {
    pub fn span(&self) -> SourceSpan {
        match self {
            Sexp::Atom(_, s) | Sexp::List(_, _, s) => *s,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            _ => None,
        }
    }

    /// Items of a parenthesised list.
    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(Delim::Paren, items, _) => Some(items),
            _ => None,
        }
    }

    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|l| l.first()).and_then(Sexp::atom)
    }

    /// Short description for error messages.
    pub fn describe(&self) -> String {
        match self {
            Sexp::Atom(a, _) => format!("`{a}`"),
            Sexp::List(Delim::Bracket, _, _) => "`[`".to_string(),
            Sexp::List(Delim::Paren, items, _) => match items.first() {
                None => "`()`".to_string(),
                Some(Sexp::Atom(a, _)) => format!("`({a} ...)`"),
                Some(_) => "`((...`".to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open(Delim),
    Close(Delim),
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(Token, usize, usize)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                out.push((Token::Open(Delim::Paren), i, 1));
                i += 1;
            }
            b')' => {
                out.push((Token::Close(Delim::Paren), i, 1));
                i += 1;
            }
            b'[' => {
                out.push((Token::Open(Delim::Bracket), i, 1));
                i += 1;
            }
            b']' => {
                out.push((Token::Close(Delim::Bracket), i, 1));
                i += 1;
            }
            _ if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !is_delimiter(bytes[i]) {
                    i += 1;
                }
                // Token boundaries are ASCII, so the slice is valid UTF-8.
                out.push((Token::Atom(text[start..i].to_lowercase()), start, i - start));
            }
        }
    }
    out
}

fn is_delimiter(b: u8) -> bool {
    b.is_ascii_whitespace() || matches!(b, b'(' | b')' | b'[' | b']' | b';')
}

fn close_char(d: Delim) -> &'static str {
    match d {
        Delim::Paren => "`)`",
        Delim::Bracket => "`]`",
    }
}

/// Reads every top-level s-expression in `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let index = LineIndex::new(text);
    let mut top = Vec::new();
    // (delimiter, start offset, items)
    let mut stack: Vec<(Delim, usize, Vec<Sexp>)> = Vec::new();
    for (tok, offset, len) in tokenize(text) {
        match tok {
            Token::Atom(a) => {
                let node = Sexp::Atom(a, index.span(offset, len));
                match stack.last_mut() {
                    Some((_, _, items)) => items.push(node),
                    None => top.push(node),
                }
            }
            Token::Open(d) => {
                if stack.len() >= MAX_DEPTH {
                    return Err(ParseError::new(
                        index.span(offset, 1),
                        format!("nesting depth at most {MAX_DEPTH}"),
                        "deeper nesting",
                    ));
                }
                stack.push((d, offset, Vec::new()));
            }
            Token::Close(d) => {
                let Some((open, start, items)) = stack.pop() else {
                    return Err(ParseError::new(
                        index.span(offset, 1),
                        "an expression",
                        format!("unmatched {}", close_char(d)),
                    ));
                };
                if open != d {
                    return Err(ParseError::new(index.span(offset, 1), close_char(open), close_char(d)));
                }
                let node = Sexp::List(d, items, index.span(start, offset + 1 - start));
                match stack.last_mut() {
                    Some((_, _, parent)) => parent.push(node),
                    None => top.push(node),
                }
            }
        }
    }
    if let Some((open, _, _)) = stack.last() {
        return Err(ParseError::new(index.span(text.len(), 0), close_char(*open), "end of input"));
    }
    Ok(top)
}
