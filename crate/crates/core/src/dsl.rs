//! Recursive-descent parser for the algebra constructor language.
//!
//! ```text
//! expr := "field(" nat ")"
//!       | "af(" nat "," nat [ "," "cat=" bool ] ")"
//!       | "poly(" expr "," nat ")"
//!       | "val(" nat "," nat ")"
//!       | "pullback(" "T=" expr "," "m=" nat "," "D=" expr [ "," "outside=" nat ] ")"
//! ```
//!
//! Whitespace is ignored between tokens. `outside` may be omitted only when
//! `T` is a valuation tower, where it is forced to `m - 1`.

use std::fmt;

use thiserror::Error;

use crate::spectra::{AlgebraExpr, SpectraError};

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        pos: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("constraint error at {span}: {source}")]
    Constraint {
        span: Span,
        #[source]
        source: SpectraError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u32),
    LParen,
    RParen,
    Comma,
    Eq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Eq => f.write_str("`=`"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'=' => Tok::Eq,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                let n = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    expected: vec!["a natural number below 2^32".into()],
                    found: format!("`{text}`"),
                })?;
                toks.push((Tok::Num(n), Span { start, end: i }));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), Span { start, end: i }));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    pos: start,
                    expected: vec!["a constructor, number or punctuation".into()],
                    found: format!("`{ch}`"),
                });
            }
        };
        i += 1;
        toks.push((tok, Span { start, end: i }));
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, s)| s.start)
    }

    fn last_end(&self) -> usize {
        self.pos.checked_sub(1).map_or(0, |i| self.toks[i].1.end)
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.here(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), |t| t.to_string()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&[&tok.to_string()])
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(&Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail(&["a natural number"]),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&[&format!("`{word}`")]),
        }
    }

    fn key_value(&mut self, key: &str) -> Result<(), ParseError> {
        self.keyword(key)?;
        self.expect(Tok::Eq)
    }

    fn boolean(&mut self) -> Result<bool, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "true" || s == "false" => {
                let b = s == "true";
                self.pos += 1;
                Ok(b)
            }
            _ => self.fail(&["`true`", "`false`"]),
        }
    }

    fn expr(&mut self) -> Result<AlgebraExpr, ParseError> {
        let start = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.fail(&["`field`", "`af`", "`poly`", "`val`", "`pullback`"]),
        };
        let expr = match name.as_str() {
            "field" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let td = self.nat()?;
                self.expect(Tok::RParen)?;
                AlgebraExpr::Field { td }
            }
            "af" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let td = self.nat()?;
                self.expect(Tok::Comma)?;
                let dim = self.nat()?;
                let mut catenarian = true;
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    self.key_value("cat")?;
                    catenarian = self.boolean()?;
                }
                self.expect(Tok::RParen)?;
                AlgebraExpr::AfDomain { td, dim, catenarian }
            }
            "poly" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let base = self.expr()?;
                self.expect(Tok::Comma)?;
                let vars = self.nat()?;
                self.expect(Tok::RParen)?;
                AlgebraExpr::poly(base, vars)
            }
            "val" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let td = self.nat()?;
                self.expect(Tok::Comma)?;
                let dim = self.nat()?;
                self.expect(Tok::RParen)?;
                AlgebraExpr::Valuation { td, dim }
            }
            "pullback" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                self.key_value("T")?;
                let ambient = self.expr()?;
                self.expect(Tok::Comma)?;
                self.key_value("m")?;
                let m = self.nat()?;
                self.expect(Tok::Comma)?;
                self.key_value("D")?;
                let subring = self.expr()?;
                let outside = if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    self.key_value("outside")?;
                    self.nat()?
                } else if matches!(ambient, AlgebraExpr::Valuation { .. }) {
                    m.saturating_sub(1)
                } else {
                    return self.fail(&["`,outside=`"]);
                };
                self.expect(Tok::RParen)?;
                AlgebraExpr::pullback(ambient, m, subring, outside)
            }
            _ => return self.fail(&["`field`", "`af`", "`poly`", "`val`", "`pullback`"]),
        };
        let span = Span {
            start,
            end: self.last_end(),
        };
        expr.validate()
            .map_err(|source| ParseError::Constraint { span, source })?;
        Ok(expr)
    }
}

/// Parses and validates an algebra expression.
pub fn parse_expr(text: &str) -> Result<AlgebraExpr, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.fail(&["end of input"]);
    }
    Ok(expr)
}

impl std::str::FromStr for AlgebraExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}
