//! Text syntax for compositions.
//!
//! ```text
//! expr   := factor (('.' | '∘') factor)*
//! factor := base ('^' nat)? | '(' expr ')' ('^' nat)?
//! base   := 's' | '*' | 'i' '_'? nat | 'id'
//! ```
//!
//! Whitespace between tokens is ignored. Factors are written outermost
//! first. `i0` is rejected; the star map is written `s` (or `*`).

use std::fmt;

use thiserror::Error;

use crate::composition::{Composition, MapAtom, NormalForm};

/// Upper bound on the number of factors a parsed expression may expand to.
pub const MAX_FACTORS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprToken {
    Star,
    Internal(u32),
    Identity,
    Compose,
    Power(u32),
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

/// Splits `text` into tokens paired with their byte offsets.
pub fn tokenize(text: &str) -> Result<Vec<(usize, ExprToken)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let start = pos;
        let ch = text[pos..].chars().next().expect("in bounds");
        match ch {
            c if c.is_whitespace() => {
                pos += c.len_utf8();
            }
            's' | '*' => {
                out.push((start, ExprToken::Star));
                pos += 1;
            }
            '.' | '∘' => {
                out.push((start, ExprToken::Compose));
                pos += ch.len_utf8();
            }
            '(' => {
                out.push((start, ExprToken::LParen));
                pos += 1;
            }
            ')' => {
                out.push((start, ExprToken::RParen));
                pos += 1;
            }
            '^' => {
                pos += 1;
                pos = skip_ws(text, pos);
                let (k, end) = read_nat(text, pos)?;
                out.push((start, ExprToken::Power(k)));
                pos = end;
            }
            'i' => {
                pos += 1;
                if bytes.get(pos) == Some(&b'd') {
                    out.push((start, ExprToken::Identity));
                    pos += 1;
                    continue;
                }
                if bytes.get(pos) == Some(&b'_') {
                    pos += 1;
                }
                let (n, end) = read_nat(text, pos)?;
                if n == 0 {
                    return Err(ParseError::new(
                        start,
                        "i0 is not a map; write `s` for the star map",
                    ));
                }
                out.push((start, ExprToken::Internal(n)));
                pos = end;
            }
            other => {
                return Err(ParseError::new(
                    start,
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    Ok(out)
}

fn skip_ws(text: &str, mut pos: usize) -> usize {
    while let Some(c) = text[pos..].chars().next() {
        if !c.is_whitespace() {
            break;
        }
        pos += c.len_utf8();
    }
    pos
}

fn read_nat(text: &str, pos: usize) -> Result<(u32, usize), ParseError> {
    let digits = text[pos..].bytes().take_while(u8::is_ascii_digit).count();
    if digits == 0 {
        return Err(ParseError::new(pos, "expected a natural number"));
    }
    let end = pos + digits;
    text[pos..end]
        .parse::<u32>()
        .map(|n| (n, end))
        .map_err(|_| ParseError::new(pos, "number too large"))
}

struct Parser<'a> {
    tokens: &'a [(usize, ExprToken)],
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<ExprToken> {
        self.tokens.get(self.at).map(|&(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn expr(&mut self) -> Result<Vec<MapAtom>, ParseError> {
        let mut factors = self.factor()?;
        while self.peek() == Some(ExprToken::Compose) {
            self.at += 1;
            let next = self.factor()?;
            check_size(factors.len() + next.len(), self.position())?;
            factors.extend(next);
        }
        Ok(factors)
    }

    fn factor(&mut self) -> Result<Vec<MapAtom>, ParseError> {
        let pos = self.position();
        let base = match self.peek() {
            Some(ExprToken::Star) => {
                self.at += 1;
                vec![MapAtom::STAR]
            }
            Some(ExprToken::Internal(n)) => {
                self.at += 1;
                vec![MapAtom::internal(n)]
            }
            Some(ExprToken::Identity) => {
                self.at += 1;
                Vec::new()
            }
            Some(ExprToken::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(ExprToken::RParen) {
                    return Err(ParseError::new(self.position(), "expected `)`"));
                }
                self.at += 1;
                inner
            }
            Some(_) => return Err(ParseError::new(pos, "expected a map, `id` or `(`")),
            None => return Err(ParseError::new(pos, "unexpected end of input")),
        };
        if let Some(ExprToken::Power(k)) = self.peek() {
            let power_pos = self.position();
            self.at += 1;
            check_size(base.len().saturating_mul(k as usize), power_pos)?;
            return Ok(base.repeat(k as usize));
        }
        Ok(base)
    }
}

fn check_size(len: usize, pos: usize) -> Result<(), ParseError> {
    if len > MAX_FACTORS {
        Err(ParseError::new(
            pos,
            format!("expression expands past {MAX_FACTORS} factors"),
        ))
    } else {
        Ok(())
    }
}

/// Parses a composition expression.
pub fn parse(text: &str) -> Result<Composition, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        at: 0,
        end: text.len(),
    };
    let factors = parser.expr()?;
    if parser.at != tokens.len() {
        return Err(ParseError::new(
            parser.position(),
            "unexpected trailing input",
        ));
    }
    Ok(Composition::new(factors))
}

/// Canonical text: runs of equal factors become powers, joined by ` . `.
pub fn pretty(c: &Composition) -> String {
    if c.is_identity() {
        return "id".to_string();
    }
    let mut parts = Vec::new();
    let factors = c.factors();
    let mut i = 0;
    while i < factors.len() {
        let run = factors[i..]
            .iter()
            .take_while(|&&a| a == factors[i])
            .count();
        if run == 1 {
            parts.push(factors[i].to_string());
        } else {
            parts.push(format!("{}^{}", factors[i], run));
        }
        i += run;
    }
    parts.join(" . ")
}

pub fn pretty_normal_form(nf: &NormalForm) -> String {
    pretty(&nf.to_composition())
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_normal_form(self))
    }
}

impl std::str::FromStr for Composition {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
