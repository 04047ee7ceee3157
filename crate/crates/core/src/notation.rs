//! Text and record forms of sequences.
//!
//! Grammar: terms separated by `*`; a term is `element` or `element^[mult]`,
//! optionally parenthesised; an element is `1`, `y`, `y^B`, `x`, `x*y` or
//! `x*y^B`. Inside a term `x*y^B` must be written without spaces around the
//! `*` (or inside parentheses); ` * ` with whitespace always separates terms.
//! Example: `(y^3)^[7] * x*y^2`.

use serde::{Deserialize, Serialize};

use crate::error::SequenceError;
use crate::group::{Group, GroupElement};
use crate::sequence::Sequence;

/// One `(a, b, mult)` record of the JSON form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub a: u8,
    pub b: i64,
    pub mult: u32,
}

pub fn from_records(group: &Group, records: &[TermRecord]) -> Result<Sequence, SequenceError> {
    let mut seq = Sequence::empty(group.order());
    for r in records {
        let b = r.b.rem_euclid(group.modulus() as i64) as u32;
        let g = group.index_of(GroupElement::new(r.a, b))?;
        seq.push(g, r.mult);
    }
    Ok(seq)
}

pub fn to_records(group: &Group, seq: &Sequence) -> Vec<TermRecord> {
    seq.support()
        .map(|(g, mult)| {
            let e = group.element(g);
            TermRecord { a: e.a, b: e.b as i64, mult }
        })
        .collect()
}

/// Canonical text: terms by element index, ` * ` between terms.
pub fn format_sequence(group: &Group, seq: &Sequence) -> String {
    seq.support()
        .map(|(g, mult)| {
            let e = group.element(g);
            if mult == 1 {
                e.to_string()
            } else {
                format!("({e})^[{mult}]")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

/// Comma-separated element list, e.g. for witness orderings.
pub fn format_word(group: &Group, word: &[usize]) -> String {
    word.iter().map(|&g| group.element(g).to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_sequence(group: &Group, text: &str) -> Result<Sequence, SequenceError> {
    let mut parser = Parser { src: text, pos: 0, group };
    let mut seq = Sequence::empty(group.order());
    parser.skip_ws();
    if parser.at_end() {
        return Ok(seq);
    }
    loop {
        let (g, mult) = parser.term()?;
        seq.push(g, mult);
        parser.skip_ws();
        if parser.at_end() {
            return Ok(seq);
        }
        if !parser.eat('*') {
            return Err(parser.error("expected `*` between terms"));
        }
        parser.skip_ws();
        if parser.at_end() {
            return Err(parser.error("dangling `*`"));
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    group: &'a Group,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn token(&self) -> String {
        let rest = self.rest();
        let end = rest.find(|c: char| c.is_whitespace()).unwrap_or(rest.len());
        if end == 0 {
            "<end of input>".to_string()
        } else {
            rest[..end].to_string()
        }
    }

    fn error(&self, reason: &str) -> SequenceError {
        SequenceError::parse(&self.token(), reason)
    }

    fn term(&mut self) -> Result<(usize, u32), SequenceError> {
        let g = if self.eat('(') {
            self.skip_ws();
            let g = self.element(true)?;
            self.skip_ws();
            if !self.eat(')') {
                return Err(self.error("expected `)`"));
            }
            g
        } else {
            self.element(false)?
        };
        let mult = if self.rest().starts_with("^[") {
            self.pos += 2;
            let m = self.integer()?;
            if !self.eat(']') {
                return Err(self.error("expected `]` after multiplicity"));
            }
            if m < 1 || m > u32::MAX as i64 {
                return Err(self.error("multiplicity must be a positive integer"));
            }
            m as u32
        } else {
            1
        };
        Ok((g, mult))
    }

    /// `spaced` allows whitespace around the inner `*` (inside parentheses).
    fn element(&mut self, spaced: bool) -> Result<usize, SequenceError> {
        let start_token = self.token();
        let element = match self.peek() {
            Some('1') => {
                self.pos += 1;
                GroupElement::IDENTITY
            }
            Some('y') => {
                self.pos += 1;
                GroupElement::y(self.exponent()?)
            }
            Some('x') => {
                self.pos += 1;
                let save = self.pos;
                if spaced {
                    self.skip_ws();
                }
                if self.eat('*') {
                    if spaced {
                        self.skip_ws();
                    }
                    if self.eat('y') {
                        GroupElement::xy(self.exponent()?)
                    } else {
                        self.pos = save;
                        GroupElement::xy(0)
                    }
                } else if self.eat('y') {
                    GroupElement::xy(self.exponent()?)
                } else {
                    self.pos = save;
                    GroupElement::xy(0)
                }
            }
            _ => return Err(self.error("expected an element `1`, `y^B`, `x` or `x*y^B`")),
        };
        self.group.index_of(element).map_err(|_| {
            SequenceError::parse(&start_token, format!("`{element}` is not an element of {}", self.group.spec()))
        })
    }

    fn exponent(&mut self) -> Result<u32, SequenceError> {
        // `y^[k]` is a multiplicity on `y`, not an exponent.
        if self.rest().starts_with('^') && !self.rest().starts_with("^[") {
            self.pos += 1;
            let e = self.integer()?;
            Ok(e.rem_euclid(self.group.modulus() as i64) as u32)
        } else {
            Ok(1 % self.group.modulus())
        }
    }

    fn integer(&mut self) -> Result<i64, SequenceError> {
        let rest = self.rest();
        let sign_len = usize::from(rest.starts_with('-'));
        let digits = rest[sign_len..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let text = &rest[..sign_len + digits];
        let value = text.parse::<i64>().map_err(|_| self.error("integer out of range"))?;
        self.pos += text.len();
        Ok(value)
    }
}
