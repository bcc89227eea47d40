//! Character cursor shared by the config and expression parsers.
//!
//! Failed expectations are recorded at the furthest position reached, so a
//! syntax error reports what would have been accepted there.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub type PResult<T> = Result<T, ParseError>;

pub struct Cursor<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pub pos: usize,
    far: usize,
    expected: BTreeSet<String>,
    /// Newlines are whitespace unless this is set.
    newline_sensitive: bool,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, chars: src.char_indices().collect(), pos: 0, far: 0, expected: BTreeSet::new(), newline_sensitive: false }
    }

    pub fn line_mode(mut self) -> Self {
        self.newline_sensitive = true;
        self
    }

    pub fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|c| c.1)
    }

    pub fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).map(|c| c.1)
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    pub fn at_end(&mut self) -> bool {
        self.ws();
        self.pos >= self.chars.len()
    }

    /// Skips blanks, and `#` comments in line mode.
    pub fn ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' && self.newline_sensitive {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.pos += 1;
                }
            } else if c.is_whitespace() && !(self.newline_sensitive && c == '\n') {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    pub fn expect_note(&mut self, what: &str) {
        if self.pos > self.far {
            self.far = self.pos;
            self.expected.clear();
        }
        if self.pos == self.far {
            self.expected.insert(what.to_string());
        }
    }

    /// Consumes `c` after whitespace.
    pub fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            self.expect_note(&format!("'{c}'"));
            false
        }
    }

    pub fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax_error())
        }
    }

    fn word_end(&self, start: usize) -> usize {
        let mut p = start;
        while self.chars.get(p).is_some_and(|c| c.1.is_alphanumeric() || c.1 == '_') {
            p += 1;
        }
        p
    }

    /// Consumes the literal `s`. Alphanumeric literals must end at a word boundary.
    pub fn eat_str(&mut self, s: &str) -> bool {
        self.ws();
        let n = s.chars().count();
        let matches = s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c));
        let boundary = !s.chars().last().is_some_and(|c| c.is_alphanumeric())
            || !self.peek_at(n).is_some_and(|c| c.is_alphanumeric() || c == '_');
        if matches && boundary {
            self.pos += n;
            true
        } else {
            self.expect_note(&format!("'{s}'"));
            false
        }
    }

    /// Checks, without consuming, whether the input continues with `s`.
    pub fn looking_at(&mut self, s: &str) -> bool {
        self.ws();
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    /// An identifier `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn ident(&mut self, what: &str) -> PResult<String> {
        self.ws();
        if self.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
            let end = self.word_end(self.pos);
            let s: String = self.chars[self.pos..end].iter().map(|c| c.1).collect();
            self.pos = end;
            Ok(s)
        } else {
            self.expect_note(what);
            Err(self.syntax_error())
        }
    }

    /// Unsigned decimal digits, without skipping whitespace.
    pub fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|c| c.1).collect())
    }

    pub fn line_col(&self, pos: usize) -> (usize, usize) {
        let byte = self.chars.get(pos).map_or(self.src.len(), |c| c.0);
        let before = &self.src[..byte];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    /// An error at the furthest point reached, listing what was expected there.
    pub fn syntax_error(&self) -> ParseError {
        let (line, col) = self.line_col(self.far.max(self.pos));
        let found = if self.far.max(self.pos) >= self.chars.len() {
            "end of input".to_string()
        } else {
            format!("'{}'", self.chars[self.far.max(self.pos)].1)
        };
        let expected = if self.far >= self.pos { self.expected.iter().cloned().collect() } else { Vec::new() };
        ParseError { line, col, message: format!("syntax error at {found}"), expected }
    }

    /// A semantic error at `pos`.
    pub fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        let (line, col) = self.line_col(pos);
        ParseError { line, col, message: message.into(), expected: Vec::new() }
    }
}
