//! Greedy extraction of sequences along a decidable predicate, with a
//! bounded oracle standing in for points of an ultrafilter.
//!
//! Every new element is required to leave the running constraint family
//! nonempty within the oracle's reach, so the construction only stops when
//! the oracle itself comes up empty.

use std::cell::Cell;

use super::certificate::VerifyError;
use super::{Certificate, RamseyError, Witness};

/// Supplies an element above a threshold in a decidable set, or `None`.
pub trait LargenessOracle: Sync {
    /// Least element `x` in the oracle's reach with `x > threshold` (any
    /// `x` when `threshold` is `None`) and `member(x)`.
    fn above(&self, threshold: Option<u64>, member: &dyn Fn(u64) -> bool) -> Option<u64>;
}

/// Linear scan of `[0, horizon)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HorizonOracle {
    pub horizon: u64,
}

pub const DEFAULT_HORIZON: u64 = 1000;

impl Default for HorizonOracle {
    fn default() -> Self {
        HorizonOracle {
            horizon: DEFAULT_HORIZON,
        }
    }
}

impl LargenessOracle for HorizonOracle {
    fn above(&self, threshold: Option<u64>, member: &dyn Fn(u64) -> bool) -> Option<u64> {
        let from = threshold.map_or(0, |t| t.saturating_add(1));
        (from..self.horizon).find(|&x| member(x))
    }
}

/// Named predicates on pairs and quadruples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredicateFamily {
    /// Always true.
    Full,
    /// Strictly increasing coordinates.
    Less,
    /// All coordinates of one parity.
    Parity,
    /// Pairwise distinct coordinates.
    Distinct,
    /// Always false.
    Empty,
}

impl PredicateFamily {
    pub const ALL: [PredicateFamily; 5] = [
        PredicateFamily::Full,
        PredicateFamily::Less,
        PredicateFamily::Parity,
        PredicateFamily::Distinct,
        PredicateFamily::Empty,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PredicateFamily::Full => "full",
            PredicateFamily::Less => "less",
            PredicateFamily::Parity => "parity",
            PredicateFamily::Distinct => "distinct",
            PredicateFamily::Empty => "empty",
        }
    }

    pub fn parse(name: &str) -> Option<PredicateFamily> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn holds(&self, x: &[u64]) -> bool {
        match self {
            PredicateFamily::Full => true,
            PredicateFamily::Less => x.windows(2).all(|w| w[0] < w[1]),
            PredicateFamily::Parity => x.iter().all(|v| v % 2 == x[0] % 2),
            PredicateFamily::Distinct => x.iter().enumerate().all(|(i, v)| !x[..i].contains(v)),
            PredicateFamily::Empty => false,
        }
    }
}

/// Increasing `a`, `b` of length `m` with `x(a_i, b_j)` for all `i <= j`.
///
/// `a_n` is the least candidate above `a_{n-1}` for which the fiber
/// intersection `{y > b_{n-1} : x(a_i, y) for all i <= n}` is still reachable;
/// `b_n` is then the least element of that intersection.
pub fn half_grid_extract<X>(
    x: X,
    oracle: &dyn LargenessOracle,
    m: usize,
) -> Result<(Vec<u64>, Vec<u64>), RamseyError>
where
    X: Fn(u64, u64) -> bool + Sync,
{
    if m == 0 {
        return Err(RamseyError::InvalidParameter("m must be at least 1".into()));
    }
    let mut a: Vec<u64> = Vec::with_capacity(m);
    let mut b: Vec<u64> = Vec::with_capacity(m);
    for depth in 0..m {
        let b_floor = b.last().copied();
        let fiber = |a: &[u64], y: u64| a.iter().all(|&ai| x(ai, y));
        let next_a = oracle.above(a.last().copied(), &|cand| {
            let mut trial = a.clone();
            trial.push(cand);
            oracle.above(b_floor, &|y| fiber(&trial, y)).is_some()
        });
        let Some(next_a) = next_a else {
            return Err(RamseyError::OracleExhausted { depth });
        };
        a.push(next_a);
        let next_b = oracle
            .above(b_floor, &|y| fiber(&a, y))
            .ok_or(RamseyError::OracleExhausted { depth })?;
        b.push(next_b);
    }
    Ok((a, b))
}

/// Predicate evaluations allowed to one [`pattern4_extract`] run.
pub const PATTERN4_BUDGET: u64 = 1 << 22;

/// Increasing `a_1, ..., a_m` (1-based) with `x(a_i, a_{2j}, a_{2j+1}, a_k)`
/// whenever `i < 2j < 2j + 1 < k`.
///
/// Each new element must complete every quadruple that ends at it and,
/// with the pairs formed so far, leave some reachable last coordinate.
/// Dead ends are retracted in lexicographic order; after
/// [`PATTERN4_BUDGET`] predicate evaluations the run stops with the
/// deepest prefix length reached.
pub fn pattern4_extract<X>(
    x: X,
    oracle: &dyn LargenessOracle,
    m: usize,
) -> Result<Vec<u64>, RamseyError>
where
    X: Fn(&[u64; 4]) -> bool + Sync,
{
    if m == 0 {
        return Err(RamseyError::InvalidParameter("m must be at least 1".into()));
    }
    let run = Pattern4Run {
        x: &x,
        oracle,
        spent: Cell::new(0),
        deepest: Cell::new(0),
    };
    let mut seq = Vec::with_capacity(m);
    if run.extend(&mut seq, m) {
        Ok(seq)
    } else {
        Err(RamseyError::OracleExhausted {
            depth: run.deepest.get(),
        })
    }
}

struct Pattern4Run<'a, X> {
    x: &'a X,
    oracle: &'a dyn LargenessOracle,
    spent: Cell<u64>,
    deepest: Cell<usize>,
}

impl<X: Fn(&[u64; 4]) -> bool> Pattern4Run<'_, X> {
    fn check(&self, q: [u64; 4]) -> bool {
        let n = self.spent.get();
        if n >= PATTERN4_BUDGET {
            return false;
        }
        self.spent.set(n + 1);
        (self.x)(&q)
    }

    /// Every quadruple over `seq` whose last coordinate is `last`.
    fn closes(&self, seq: &[u64], last: u64) -> bool {
        let mut j = 1;
        while 2 * j < seq.len() {
            let (p, q) = (seq[2 * j - 1], seq[2 * j]);
            for i in 1..2 * j {
                if !self.check([seq[i - 1], p, q, last]) {
                    return false;
                }
            }
            j += 1;
        }
        true
    }

    fn extend(&self, seq: &mut Vec<u64>, m: usize) -> bool {
        if seq.len() == m {
            return true;
        }
        let mut floor = seq.last().copied();
        while self.spent.get() < PATTERN4_BUDGET {
            let next = self.oracle.above(floor, &|cand| {
                if !self.closes(seq, cand) {
                    return false;
                }
                let mut trial = seq.clone();
                trial.push(cand);
                self.oracle
                    .above(Some(cand), &|y| self.closes(&trial, y))
                    .is_some()
            });
            let Some(v) = next else { return false };
            seq.push(v);
            self.deepest.set(self.deepest.get().max(seq.len()));
            if self.extend(seq, m) {
                return true;
            }
            seq.pop();
            floor = Some(v);
        }
        false
    }
}

pub fn half_grid_certificate(
    family: PredicateFamily,
    oracle: &dyn LargenessOracle,
    m: usize,
) -> Result<Certificate, RamseyError> {
    let (a, b) = half_grid_extract(|p, q| family.holds(&[p, q]), oracle, m)?;
    Ok(Certificate::for_predicate(
        Witness::HalfGrid { a, b },
        family,
    ))
}

pub fn pattern4_certificate(
    family: PredicateFamily,
    oracle: &dyn LargenessOracle,
    m: usize,
) -> Result<Certificate, RamseyError> {
    let seq = pattern4_extract(|q| family.holds(q), oracle, m)?;
    Ok(Certificate::for_predicate(
        Witness::Pattern4 { seq },
        family,
    ))
}

fn increasing(s: &[u64]) -> bool {
    s.windows(2).all(|w| w[0] < w[1])
}

/// Checks an extraction certificate against every index pair or quadruple.
pub fn check_extraction(cert: &Certificate, family: PredicateFamily) -> Result<(), VerifyError> {
    if cert.coloring_digest != super::certificate::predicate_digest(family) {
        return Err(VerifyError::DigestMismatch);
    }
    match &cert.witness {
        Witness::HalfGrid { a, b } => {
            if a.len() != b.len() || a.is_empty() || !increasing(a) || !increasing(b) {
                return Err(VerifyError::Malformed(
                    "sequences must be increasing and of equal length".into(),
                ));
            }
            for (j, &bj) in b.iter().enumerate() {
                for (i, &ai) in a[..=j].iter().enumerate() {
                    if !family.holds(&[ai, bj]) {
                        return Err(VerifyError::PatternFails(format!("(a_{i}, b_{j})")));
                    }
                }
            }
            Ok(())
        }
        Witness::Pattern4 { seq } => {
            if seq.is_empty() || !increasing(seq) {
                return Err(VerifyError::Malformed("sequence must be increasing".into()));
            }
            let m = seq.len();
            for k in 1..=m {
                let mut j = 1;
                while 2 * j + 1 < k {
                    for i in 1..2 * j {
                        let q = [seq[i - 1], seq[2 * j - 1], seq[2 * j], seq[k - 1]];
                        if !family.holds(&q) {
                            return Err(VerifyError::PatternFails(format!(
                                "({i}, {}, {}, {k})",
                                2 * j,
                                2 * j + 1
                            )));
                        }
                    }
                    j += 1;
                }
            }
            Ok(())
        }
        _ => Err(VerifyError::WrongSubject("coloring")),
    }
}

pub fn verify_extraction(cert: &Certificate, family: PredicateFamily) -> bool {
    check_extraction(cert, family).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    const H100: HorizonOracle = HorizonOracle { horizon: 100 };

    #[test]
    fn half_grid_examples() {
        assert_eq!(
            half_grid_extract(|_, _| true, &H100, 3).unwrap(),
            (vec![0, 1, 2], vec![0, 1, 2])
        );
        assert_eq!(
            half_grid_extract(|a, b| a < b, &H100, 3).unwrap(),
            (vec![0, 1, 2], vec![1, 2, 3])
        );
        assert_eq!(
            half_grid_extract(|_, _| false, &H100, 3),
            Err(RamseyError::OracleExhausted { depth: 0 })
        );
        let cert = half_grid_certificate(PredicateFamily::Less, &H100, 3).unwrap();
        assert!(verify_extraction(&cert, PredicateFamily::Less));
        assert!(!verify_extraction(&cert, PredicateFamily::Parity));
    }

    #[test]
    fn pattern4_examples() {
        assert_eq!(
            pattern4_extract(|_| true, &H100, 5).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        let cert = pattern4_certificate(PredicateFamily::Distinct, &H100, 7).unwrap();
        assert!(verify_extraction(&cert, PredicateFamily::Distinct));
        assert_eq!(
            pattern4_extract(|_| false, &H100, 5),
            Err(RamseyError::OracleExhausted { depth: 2 })
        );
    }

    #[test]
    fn tampered_extraction_is_rejected() {
        let mut cert = pattern4_certificate(PredicateFamily::Parity, &H100, 8).unwrap();
        if let Witness::Pattern4 { seq } = &mut cert.witness {
            seq[7] += 1;
        }
        assert!(matches!(
            check_extraction(&cert, PredicateFamily::Parity),
            Err(VerifyError::PatternFails(_))
        ));
    }

    #[test]
    fn small_horizon_exhausts() {
        let short = HorizonOracle { horizon: 5 };
        assert_eq!(
            half_grid_extract(|a, b| a % 2 == b % 2, &short, 4),
            Err(RamseyError::OracleExhausted { depth: 3 })
        );
    }
}
