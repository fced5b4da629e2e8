//! Axiom files: one item per line, `#` starts a comment line.
//!
//! ```text
//! gen gamma@1
//! gen delta@1#1
//! gamma ~u delta
//! (gamma, delta) ~u (delta, gamma)
//! scheme l: gamma ~u gamma + l * delta
//! ```

use thiserror::Error;

use super::{AxiomSet, Scheme, UFact};
use crate::hypernat::{GeneratorEnv, HTerm, TermParser, TermSyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct AxiomFileError {
    pub line: usize,
    /// 1-based byte column.
    pub column: usize,
    pub message: String,
}

const SEPARATORS: [&str; 2] = ["~u", "∼ᵤ"];

fn split_judgment(text: &str) -> Result<(&str, usize, &str), (usize, String)> {
    let mut found = None;
    for sep in SEPARATORS {
        for (i, _) in text.match_indices(sep) {
            if found.is_some() {
                return Err((i, "more than one `~u`".into()));
            }
            found = Some((i, sep.len()));
        }
    }
    let (i, len) = found.ok_or((0, "expected `lhs ~u rhs`".to_string()))?;
    Ok((&text[..i], i + len, &text[i + len..]))
}

/// Parses `lhs ~u rhs`. Error positions are byte offsets into `text`.
fn judgment_tuples(
    parser: &TermParser,
    text: &str,
) -> Result<(Vec<HTerm>, Vec<HTerm>), (usize, String)> {
    let (l, rhs_start, r) = split_judgment(text)?;
    let at = |offset: usize| move |e: TermSyntaxError| (offset + e.position, e.message);
    let lhs = parser.parse_tuple(l).map_err(at(0))?;
    let rhs = parser.parse_tuple(r).map_err(at(rhs_start))?;
    Ok((lhs, rhs))
}

/// Parses a single judgment such as a derivation goal.
pub fn parse_judgment(text: &str, env: &GeneratorEnv) -> Result<UFact, AxiomFileError> {
    let to_err = |(pos, message): (usize, String)| AxiomFileError {
        line: 1,
        column: pos + 1,
        message,
    };
    let (l, r) = judgment_tuples(&TermParser::new(env), text).map_err(to_err)?;
    UFact::new(l, r).map_err(|e| to_err((0, e.to_string())))
}

pub fn parse_axiom_file(text: &str, env: &GeneratorEnv) -> Result<AxiomSet, AxiomFileError> {
    let mut set = AxiomSet::new();
    for (ln, raw) in text.lines().enumerate() {
        let indent = raw.len() - raw.trim_start().len();
        let line = raw.trim();
        let fail = |pos: usize, message: String| AxiomFileError {
            line: ln + 1,
            column: indent + pos + 1,
            message,
        };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("gen ") {
            declare(rest.trim(), env).map_err(|m| fail(4, m))?;
        } else if let Some(rest) = line.strip_prefix("scheme ") {
            let offset = line.len() - rest.len();
            let colon = rest
                .find(':')
                .ok_or_else(|| fail(offset, "expected `scheme NAME: judgment`".into()))?;
            let name = rest[..colon].trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(fail(offset, format!("invalid scheme parameter `{name}`")));
            }
            let body_at = offset + colon + 1;
            set.schemes.push(
                scheme(name, &rest[colon + 1..], env).map_err(|(p, m)| fail(body_at + p, m))?,
            );
        } else {
            let (l, r) =
                judgment_tuples(&TermParser::new(env), line).map_err(|(p, m)| fail(p, m))?;
            set.facts
                .push(UFact::new(l, r).map_err(|e| fail(0, e.to_string()))?);
        }
    }
    Ok(set)
}

fn declare(decl: &str, env: &GeneratorEnv) -> Result<(), String> {
    let (name, spec) = decl.split_once('@').ok_or("expected `gen NAME@LEVEL`")?;
    let (level, rank) = match spec.split_once('#') {
        Some((l, r)) => (
            l,
            Some(r.trim().parse::<u32>().map_err(|_| "invalid rank")?),
        ),
        None => (spec, None),
    };
    let level: u32 = level.trim().parse().map_err(|_| "invalid level")?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("invalid generator name `{name}`"));
    }
    if name.starts_with(|c: char| c.is_ascii_digit()) || name == "std" || name == "gen" {
        return Err(format!("reserved or numeric generator name `{name}`"));
    }
    env.register(name, level, rank)
        .map(|_| ())
        .map_err(|e| e.to_string())
}

fn scheme(parameter: &str, body: &str, env: &GeneratorEnv) -> Result<Scheme, (usize, String)> {
    let mut samples = Vec::with_capacity(4);
    for l in 0..4u64 {
        let mut parser = TermParser::new(env);
        parser.bind(parameter, HTerm::std(l));
        let (lhs, rhs) = judgment_tuples(&parser, body)?;
        if lhs.len() != 1 || rhs.len() != 1 {
            return Err((0, "scheme sides must be single terms".into()));
        }
        samples.push((lhs[0].clone(), rhs[0].clone()));
    }
    Scheme::from_samples(parameter, |l| Ok(samples[l as usize].clone()))
        .map_err(|e| (0, e.to_string()))
}
