//! Text syntax for hypernatural terms.
//!
//! ```text
//! tuple := '(' sum (',' sum)+ ')' | sum
//! sum   := prod ('+' prod)*
//! prod  := power ('*' power)*
//! power := atom ('^' power)?
//! atom  := nat | 'std:' nat | 'gen:' name '@' nat ('#' nat)?
//!        | '[' expr ']' '(' sum ')' | name | '(' sum ')'
//! ```
//!
//! `gen:g1@2` registers (or re-uses) generator `g1` born at level 2, and
//! `#r` pins its base rank. A bare `name` refers to a registered generator
//! or a bound parameter. `[expr](t)` applies a composition to `t`.

use std::collections::HashMap;

use num_bigint::BigUint;
use thiserror::Error;

use super::{EnvError, GeneratorEnv, HTerm};
use crate::expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term syntax error at byte {position}: {message}")]
pub struct TermSyntaxError {
    pub position: usize,
    pub message: String,
}

fn err(position: usize, message: impl Into<String>) -> TermSyntaxError {
    TermSyntaxError {
        position,
        message: message.into(),
    }
}

const MAX_DEPTH: usize = 256;

/// Parser bound to a generator registry and optional named parameters.
pub struct TermParser<'e> {
    env: &'e GeneratorEnv,
    bindings: HashMap<String, HTerm>,
}

impl<'e> TermParser<'e> {
    pub fn new(env: &'e GeneratorEnv) -> Self {
        TermParser {
            env,
            bindings: HashMap::new(),
        }
    }

    pub fn bind(&mut self, name: &str, value: HTerm) -> &mut Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    pub fn unbind(&mut self, name: &str) -> &mut Self {
        self.bindings.remove(name);
        self
    }

    pub fn parse(&self, text: &str) -> Result<HTerm, TermSyntaxError> {
        let mut cur = Cursor {
            text,
            pos: 0,
            depth: 0,
        };
        let t = self.sum(&mut cur)?;
        cur.skip_ws();
        if cur.pos != text.len() {
            return Err(err(cur.pos, "unexpected trailing input"));
        }
        Ok(t)
    }

    /// Parses a single term or a parenthesised, comma-separated tuple.
    pub fn parse_tuple(&self, text: &str) -> Result<Vec<HTerm>, TermSyntaxError> {
        let mut cur = Cursor {
            text,
            pos: 0,
            depth: 0,
        };
        cur.skip_ws();
        if cur.eat('(') {
            let first = self.sum(&mut cur)?;
            cur.skip_ws();
            if cur.eat(',') {
                let mut items = vec![first];
                loop {
                    items.push(self.sum(&mut cur)?);
                    cur.skip_ws();
                    if cur.eat(',') {
                        continue;
                    }
                    if cur.eat(')') {
                        break;
                    }
                    return Err(err(cur.pos, "expected `,` or `)` in tuple"));
                }
                cur.skip_ws();
                if cur.pos != text.len() {
                    return Err(err(cur.pos, "unexpected trailing input"));
                }
                return Ok(items);
            }
        }
        Ok(vec![self.parse(text)?])
    }

    fn sum(&self, cur: &mut Cursor) -> Result<HTerm, TermSyntaxError> {
        cur.enter()?;
        let mut acc = self.prod(cur)?;
        loop {
            cur.skip_ws();
            if !cur.eat('+') {
                break;
            }
            acc = HTerm::add(acc, self.prod(cur)?);
        }
        cur.depth -= 1;
        Ok(acc)
    }

    fn prod(&self, cur: &mut Cursor) -> Result<HTerm, TermSyntaxError> {
        let mut acc = self.power(cur)?;
        loop {
            cur.skip_ws();
            if !cur.eat('*') {
                break;
            }
            acc = HTerm::mul(acc, self.power(cur)?);
        }
        Ok(acc)
    }

    fn power(&self, cur: &mut Cursor) -> Result<HTerm, TermSyntaxError> {
        cur.enter()?;
        let base = self.atom(cur)?;
        cur.skip_ws();
        let out = if cur.eat('^') {
            HTerm::pow(base, self.power(cur)?)
        } else {
            base
        };
        cur.depth -= 1;
        Ok(out)
    }

    fn atom(&self, cur: &mut Cursor) -> Result<HTerm, TermSyntaxError> {
        cur.skip_ws();
        let start = cur.pos;
        let Some(c) = cur.peek() else {
            return Err(err(start, "unexpected end of input"));
        };
        if c.is_ascii_digit() {
            return Ok(HTerm::Std(cur.big_nat()?));
        }
        if c == '(' {
            cur.pos += 1;
            let t = self.sum(cur)?;
            cur.skip_ws();
            if !cur.eat(')') {
                return Err(err(cur.pos, "expected `)`"));
            }
            return Ok(t);
        }
        if c == '[' {
            let close = cur.text[start..]
                .find(']')
                .map(|i| start + i)
                .ok_or_else(|| err(start, "unterminated `[`"))?;
            let comp = expr::parse(&cur.text[start + 1..close])
                .map_err(|e| err(start + 1 + e.position, e.message))?;
            cur.pos = close + 1;
            cur.skip_ws();
            if !cur.eat('(') {
                return Err(err(cur.pos, "expected `(` after map"));
            }
            let arg = self.sum(cur)?;
            cur.skip_ws();
            if !cur.eat(')') {
                return Err(err(cur.pos, "expected `)`"));
            }
            return Ok(arg.apply_composition(&comp));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let name = cur.ident();
            if name == "std" && cur.peek() == Some(':') {
                cur.pos += 1;
                return Ok(HTerm::Std(cur.big_nat()?));
            }
            if name == "gen" && cur.peek() == Some(':') {
                cur.pos += 1;
                let name_pos = cur.pos;
                let gname = cur.ident();
                if gname.is_empty() {
                    return Err(err(name_pos, "expected generator name"));
                }
                if !cur.eat('@') {
                    return Err(err(cur.pos, "expected `@level`"));
                }
                let level = cur.small_nat()?;
                let rank = if cur.eat('#') {
                    Some(cur.small_nat()?)
                } else {
                    None
                };
                let g = self
                    .env
                    .register(gname, level, rank)
                    .map_err(|e: EnvError| err(start, e.to_string()))?;
                return Ok(HTerm::gen(&g));
            }
            if let Some(v) = self.bindings.get(name) {
                return Ok(v.clone());
            }
            return match self.env.get(name) {
                Some(g) => Ok(HTerm::gen(&g)),
                None => Err(err(start, format!("unknown generator `{name}`"))),
            };
        }
        Err(err(start, format!("unexpected character {c:?}")))
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), TermSyntaxError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(err(self.pos, "term nested too deeply"));
        }
        Ok(())
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        let len = self.text[start..]
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        self.pos += len;
        &self.text[start..start + len]
    }

    fn digits(&mut self) -> Result<&'a str, TermSyntaxError> {
        let start = self.pos;
        let len = self.text[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if len == 0 {
            return Err(err(start, "expected a natural number"));
        }
        self.pos += len;
        Ok(&self.text[start..start + len])
    }

    fn big_nat(&mut self) -> Result<BigUint, TermSyntaxError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| err(start, "invalid number"))
    }

    fn small_nat(&mut self) -> Result<u32, TermSyntaxError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| err(start, "number too large"))
    }
}

/// Parses a term against `env`, registering any `gen:` declarations.
pub fn parse_term(text: &str, env: &GeneratorEnv) -> Result<HTerm, TermSyntaxError> {
    TermParser::new(env).parse(text)
}

fn precedence(t: &HTerm) -> u8 {
    match t {
        HTerm::Add(..) => 1,
        HTerm::Mul(..) => 2,
        HTerm::Pow(..) => 3,
        _ => 4,
    }
}

fn wrap(t: &HTerm, min: u8, out: &mut String) {
    if precedence(t) < min {
        out.push('(');
        write_term(t, out);
        out.push(')');
    } else {
        write_term(t, out);
    }
}

fn write_term(t: &HTerm, out: &mut String) {
    match t {
        HTerm::Std(n) => out.push_str(&n.to_string()),
        HTerm::Img(a) => {
            if a.map().is_identity() {
                out.push_str(a.generator().name());
            } else {
                out.push('[');
                out.push_str(&expr::pretty_normal_form(a.map()));
                out.push_str("](");
                out.push_str(a.generator().name());
                out.push(')');
            }
        }
        HTerm::Add(a, b) => {
            wrap(a, 1, out);
            out.push_str(" + ");
            wrap(b, 2, out);
        }
        HTerm::Mul(a, b) => {
            wrap(a, 2, out);
            out.push_str(" * ");
            wrap(b, 3, out);
        }
        HTerm::Pow(a, b) => {
            wrap(a, 4, out);
            out.push('^');
            wrap(b, 3, out);
        }
    }
}

/// Prints a term in the syntax accepted by [`TermParser`], naming
/// generators by their registered names.
pub fn format_term(t: &HTerm) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::MapAtom;
    use crate::expr::parse;

    #[test]
    fn parses_documented_forms() {
        let env = GeneratorEnv::new();
        let p = TermParser::new(&env);
        assert_eq!(p.parse("std:7").unwrap(), HTerm::std(7));
        assert_eq!(p.parse("7").unwrap(), HTerm::std(7));
        let g = p.parse("gen:g1@2").unwrap();
        assert_eq!(g.level(), 2);
        let img = p.parse("[i_1.s](g1)").unwrap();
        let g1 = env.get("g1").unwrap();
        assert_eq!(img, HTerm::img(&parse("i_1 . s").unwrap().normalize(), &g1));
        let arith = p.parse("g1 + 2 * g1 ^ 3").unwrap();
        assert_eq!(
            arith,
            HTerm::add(
                HTerm::gen(&g1),
                HTerm::mul(HTerm::std(2), HTerm::pow(HTerm::gen(&g1), HTerm::std(3)))
            )
        );
    }

    #[test]
    fn map_application_distributes() {
        let env = GeneratorEnv::new();
        let p = TermParser::new(&env);
        let t = p.parse("[s](2^gen:g@1 + 1)").unwrap();
        let g = env.get("g").unwrap();
        let sg = HTerm::gen(&g).apply_map(MapAtom::STAR);
        assert_eq!(t, HTerm::add(HTerm::pow(HTerm::std(2), sg), HTerm::std(1)));
    }

    #[test]
    fn tuples_and_bindings() {
        let env = GeneratorEnv::new();
        env.register("a", 1, None).unwrap();
        let mut p = TermParser::new(&env);
        p.bind("l", HTerm::std(3));
        let tup = p.parse_tuple("(a, a + l)").unwrap();
        assert_eq!(tup.len(), 2);
        assert_eq!(p.parse_tuple("(a + l)").unwrap().len(), 1);
    }

    #[test]
    fn errors_carry_positions() {
        let env = GeneratorEnv::new();
        let p = TermParser::new(&env);
        assert_eq!(p.parse("x").unwrap_err().position, 0);
        assert_eq!(p.parse("1 +").unwrap_err().position, 3);
        assert_eq!(p.parse("[i0](1)").unwrap_err().position, 1);
        assert_eq!(p.parse("gen:a@0").unwrap_err().position, 0);
        assert!(p.parse("(((1)").is_err());
        assert!(p.parse(&"(".repeat(1000)).is_err());
    }

    #[test]
    fn printing_round_trips() {
        let env = GeneratorEnv::new();
        let p = TermParser::new(&env);
        for text in [
            "2^g * [s](h)",
            "(g + 1) * (h + 2)",
            "2^(g + h)",
            "(2^g)^h",
            "g * (h * 3)",
            "[s^2 . i_1](gen:w@3)",
        ] {
            env.register("g", 1, None).unwrap();
            env.register("h", 1, None).unwrap();
            let t = p.parse(text).unwrap();
            assert_eq!(p.parse(&format_term(&t)).unwrap(), t, "{text}");
        }
    }
}
