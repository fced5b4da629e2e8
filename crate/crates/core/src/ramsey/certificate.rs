use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::extract::PredicateFamily;
use super::{exp_triple, ColoringSpec, ExpKind, RamseyError};

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(D::Error::custom("expected a decimal string"));
        }
        BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| D::Error::custom("invalid decimal"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "witness")]
pub enum Witness {
    MonoSet {
        set: Vec<u64>,
    },
    Homothetic {
        a: Vec<u64>,
        d: u64,
    },
    SchurTriple {
        a: u64,
        b: u64,
    },
    BrauerTuple {
        a: u64,
        d: u64,
        l: u64,
    },
    ExpWitness {
        kind: ExpKind,
        #[serde(with = "decimal")]
        a: BigUint,
        #[serde(with = "decimal")]
        b: BigUint,
    },
    HalfGrid {
        a: Vec<u64>,
        b: Vec<u64>,
    },
    Pattern4 {
        seq: Vec<u64>,
    },
}

/// A witness together with the color it claims and a digest of the
/// coloring (or predicate) it was found for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    #[serde(flatten)]
    pub witness: Witness,
    pub color: Option<u32>,
    pub coloring_digest: String,
}

impl Certificate {
    pub fn for_coloring(witness: Witness, color: u32, coloring: &ColoringSpec) -> Self {
        Certificate {
            witness,
            color: Some(color),
            coloring_digest: coloring.digest(),
        }
    }

    pub fn for_predicate(witness: Witness, family: PredicateFamily) -> Self {
        Certificate {
            witness,
            color: None,
            coloring_digest: predicate_digest(family),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, RamseyError> {
        serde_json::from_str(text).map_err(|e| RamseyError::Certificate(e.to_string()))
    }
}

pub(crate) fn predicate_digest(family: PredicateFamily) -> String {
    hex::encode(Sha256::digest(
        format!("predicate {}\n", family.name()).as_bytes(),
    ))
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("certificate was issued for a different coloring")]
    DigestMismatch,
    #[error("witness is malformed: {0}")]
    Malformed(String),
    #[error("{0} is outside the coloring's domain")]
    OutOfDomain(String),
    #[error("{0} does not have color {1}")]
    WrongColor(String, u32),
    #[error("pattern fails at {0}")]
    PatternFails(String),
    #[error("certificate kind needs a {0}")]
    WrongSubject(&'static str),
}

fn mono<I>(c: &ColoringSpec, color: Option<u32>, points: I) -> Result<(), VerifyError>
where
    I: IntoIterator<Item = Vec<u64>>,
{
    let color = color.ok_or_else(|| VerifyError::Malformed("missing color".into()))?;
    for p in points {
        match c.color(&p) {
            None => return Err(VerifyError::OutOfDomain(format!("{p:?}"))),
            Some(x) if x != color => return Err(VerifyError::WrongColor(format!("{p:?}"), color)),
            Some(_) => {}
        }
    }
    Ok(())
}

fn k_subsets(set: &[u64], k: usize) -> Vec<Vec<u64>> {
    fn rec(set: &[u64], k: usize, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..set.len() {
            cur.push(set[i]);
            rec(set, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(set, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Re-evaluates a coloring certificate from scratch. `shape` carries the
/// pattern `S` for homothetic copies.
pub fn check_certificate(
    cert: &Certificate,
    c: &ColoringSpec,
    shape: Option<&[Vec<u64>]>,
) -> Result<(), VerifyError> {
    if cert.coloring_digest != c.digest() {
        return Err(VerifyError::DigestMismatch);
    }
    let one = |v: u64| vec![v];
    match &cert.witness {
        Witness::MonoSet { set } => {
            let k = c.arity() as usize;
            if c.dim() != 1 || set.len() < k || set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(VerifyError::Malformed(
                    "set must be strictly increasing and hold a tuple".into(),
                ));
            }
            mono(c, cert.color, k_subsets(set, k))
        }
        Witness::Homothetic { a, d } => {
            let shape = shape.ok_or(VerifyError::WrongSubject("pattern S"))?;
            let s = c.dim() as usize;
            if c.arity() != 1 || a.len() != s || *d == 0 || shape.iter().any(|x| x.len() != s) {
                return Err(VerifyError::Malformed(
                    "dimensions disagree or d = 0".into(),
                ));
            }
            let mut points = Vec::with_capacity(shape.len());
            for x in shape {
                let p: Option<Vec<u64>> = a
                    .iter()
                    .zip(x)
                    .map(|(&ai, &xi)| d.checked_mul(xi).and_then(|v| v.checked_add(ai)))
                    .collect();
                points.push(p.ok_or_else(|| VerifyError::OutOfDomain("overflowing point".into()))?);
            }
            mono(c, cert.color, points)
        }
        Witness::SchurTriple { a, b } => {
            if *a == 0 || a > b {
                return Err(VerifyError::Malformed("need 1 <= a <= b".into()));
            }
            let sum = a
                .checked_add(*b)
                .ok_or_else(|| VerifyError::Malformed("overflow".into()))?;
            mono(c, cert.color, [one(*a), one(*b), one(sum)])
        }
        Witness::BrauerTuple { a, d, l } => {
            if *a == 0 || *d == 0 || *l == 0 {
                return Err(VerifyError::Malformed("need a, d, l >= 1".into()));
            }
            let mut points = vec![one(*d)];
            for i in 0..=*l {
                let v = d
                    .checked_mul(i)
                    .and_then(|x| x.checked_add(*a))
                    .ok_or_else(|| VerifyError::Malformed("overflow".into()))?;
                points.push(one(v));
            }
            mono(c, cert.color, points)
        }
        Witness::ExpWitness { kind, a, b } => {
            let builtin = c
                .as_builtin()
                .ok_or(VerifyError::WrongSubject("builtin coloring"))?;
            let triple = exp_triple(*kind, a, b)
                .ok_or_else(|| VerifyError::Malformed("degenerate triple".into()))?;
            let color = cert
                .color
                .ok_or_else(|| VerifyError::Malformed("missing color".into()))?;
            for v in &triple {
                if builtin.color_big(v) != color {
                    return Err(VerifyError::WrongColor(v.to_string(), color));
                }
            }
            Ok(())
        }
        Witness::HalfGrid { .. } | Witness::Pattern4 { .. } => {
            Err(VerifyError::WrongSubject("predicate"))
        }
    }
}

pub fn verify_certificate(
    cert: &Certificate,
    c: &ColoringSpec,
    shape: Option<&[Vec<u64>]>,
) -> bool {
    check_certificate(cert, c, shape).is_ok()
}
