//! Recursive-descent parser for the formula language.
//!
//! ```text
//! iff   : impl ("<->" impl)*
//! impl  : disj ("->" impl)?
//! disj  : conj ("\/" conj)*
//! conj  : fuse ("/\" fuse)*
//! fuse  : unary ("&" unary)*
//! unary : ("~" | "[]" | "<>" | "D") unary | atom ("^" NAT)?
//! atom  : "0" | "1" | IDENT | "(" iff ")"
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use super::Formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending token.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected one of {}, found {}",
            self.offset,
            self.expected.join(", "),
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Iff,
    Arrow,
    Or,
    And,
    Amp,
    Tilde,
    BoxOp,
    DiaOp,
    Delta,
    Caret,
    LParen,
    RParen,
    Nat(String),
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Iff => "`<->`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::BoxOp => "`[]`".into(),
            Tok::DiaOp => "`<>`".into(),
            Tok::Delta => "`D`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

const OPERAND: &[&str] = &["`0`", "`1`", "identifier", "`(`", "`~`", "`[]`", "`<>`", "`D`"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        let fixed: &[(&str, Tok)] = &[
            ("<->", Tok::Iff),
            ("->", Tok::Arrow),
            ("\\/", Tok::Or),
            ("/\\", Tok::And),
            ("[]", Tok::BoxOp),
            ("<>", Tok::DiaOp),
            ("&", Tok::Amp),
            ("~", Tok::Tilde),
            ("^", Tok::Caret),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("D", Tok::Delta),
        ];
        if let Some((s, t)) = fixed.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push((i, t.clone()));
            i += s.len();
            continue;
        }
        if c.is_ascii_digit() {
            let len = rest.bytes().take_while(u8::is_ascii_digit).count();
            out.push((i, Tok::Nat(rest[..len].to_string())));
            i += len;
            continue;
        }
        if c.is_ascii_lowercase() {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            out.push((i, Tok::Ident(rest[..len].to_string())));
            i += len;
            continue;
        }
        let ch = rest.chars().next().unwrap();
        return Err(ParseError {
            offset: i,
            expected: vec!["a formula token"],
            found: format!("character `{ch}`"),
        });
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (offset, tok) = &self.toks[self.pos];
        ParseError {
            offset: *offset,
            expected: expected.to_vec(),
            found: tok.describe(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::join(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.fuse()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::meet(lhs, self.fuse()?);
        }
        Ok(lhs)
    }

    fn fuse(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::fuse(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::BoxOp => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::DiaOp => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::Delta => {
                self.bump();
                Ok(Formula::delta(self.unary()?))
            }
            _ => {
                let base = self.atom()?;
                if *self.peek() == Tok::Caret {
                    self.bump();
                    match self.bump() {
                        Tok::Nat(n) => {
                            let m = BigUint::from_str(&n).expect("lexer yields digits");
                            Ok(Formula::Power(Box::new(base), m))
                        }
                        _ => {
                            self.pos -= 1;
                            Err(self.error(&["natural number"]))
                        }
                    }
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Nat(n) if n == "0" => {
                self.bump();
                Ok(Formula::Zero)
            }
            Tok::Nat(n) if n == "1" => {
                self.bump();
                Ok(Formula::One)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(OPERAND)),
        }
    }
}

/// Parses a formula; `¬` and `↔` are expanded on the fly.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["`<->`", "`->`", "`\\/`", "`/\\`", "`&`", "`^`", "end of input"]));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
